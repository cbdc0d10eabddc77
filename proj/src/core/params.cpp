// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

namespace waf {

namespace {

bool is_letter_cp(char32_t cp)
{
    if ((cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z')) return true;
    if (cp == 0xD7 || cp == 0xF7) return false;       // multiplication/division signs
    if (cp >= 0xC0 && cp <= 0x24F) return true;       // Latin-1 supplement + extended
    if (cp >= 0x370 && cp <= 0x3FF) return true;      // Greek
    if (cp >= 0x400 && cp <= 0x4FF) return true;      // Cyrillic
    return false;
}

} // namespace

FeatureVector featurize(const Bytes& value)
{
    FeatureVector f{};
    if (value.empty()) return f;

    size_t n = 0, digits = 0, letters = 0, punct = 0, other = 0;
    std::map<char32_t, size_t> counts;
    size_t i = 0;
    while (i < value.size()) {
        Utf8Step st = utf8_step(value, i);
        char32_t cp = st.valid
                          ? st.cp
                          : 0x110000 + static_cast<unsigned char>(value[i]);
        ++n;
        ++counts[cp];
        if (cp >= '0' && cp <= '9') ++digits;
        else if (is_letter_cp(cp)) ++letters;
        else if (cp >= 0x21 && cp <= 0x7E) ++punct; // remaining printable ascii
        else ++other;
        i += st.width;
    }

    double entropy = 0.0;
    for (const auto& [cp, c] : counts) {
        double p = static_cast<double>(c) / static_cast<double>(n);
        entropy -= p * std::log2(p);
    }

    double dn = static_cast<double>(n);
    f[0] = dn;
    f[1] = static_cast<double>(digits) / dn;
    f[2] = static_cast<double>(letters) / dn;
    f[3] = static_cast<double>(punct) / dn;
    f[4] = static_cast<double>(other) / dn;
    f[5] = entropy < 0 ? 0.0 : entropy;
    return f;
}

namespace {

// Regularized lower incomplete gamma P(a, x), series and continued-fraction
// forms per the usual numeric recipes.
double gammp(double a, double x)
{
    if (x < 0 || a <= 0) return 0.0;
    if (x == 0) return 0.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    // continued fraction for Q, then P = 1 - Q
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    double q = std::exp(-x + a * std::log(x) - gln) * h;
    return 1.0 - q;
}

} // namespace

double chi2_quantile(double p, double k)
{
    if (p <= 0.0) return 0.0;
    if (p >= 1.0) return std::numeric_limits<double>::infinity();
    const double a = k / 2.0;
    auto cdf = [a](double x) { return gammp(a, x / 2.0); };
    double lo = 0.0, hi = k > 1 ? k : 1.0;
    while (cdf(hi) < p) {
        hi *= 2.0;
        if (hi > 1e12) break;
    }
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        if (cdf(mid) < p) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

void TypeRegistry::add(std::string name, const std::string& pattern_source)
{
    entries_.push_back({std::move(name), Regex::compile(pattern_source)});
}

bool TypeRegistry::remove(const std::string& name)
{
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
        if (it->name == name) {
            entries_.erase(it);
            return true;
        }
    }
    return false;
}

const TypeEntry* TypeRegistry::find(const std::string& name) const
{
    for (const auto& e : entries_)
        if (e.name == name) return &e;
    return nullptr;
}

TypeRegistry TypeRegistry::built_in()
{
    TypeRegistry r;
    r.add("integer", "-?[0-9]+");
    r.add("decimal", "-?[0-9]+\\.[0-9]+");
    r.add("hex-token", "[0-9a-fA-F]{8,}");
    r.add("uuid",
          "[0-9a-fA-F]{8}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{4}-[0-9a-fA-F]{12}");
    r.add("email", "[A-Za-z0-9._%+-]+@[A-Za-z0-9.-]+\\.[A-Za-z]{2,}");
    r.add("iso-date",
          "[0-9]{4}-[0-9]{2}-[0-9]{2}(T[0-9]{2}:[0-9]{2}:[0-9]{2}(Z|[+-][0-9]{2}:[0-9]{2})?)?");
    r.add("phone", "\\+?[0-9][0-9 ()./-]{4,}[0-9]");
    r.add("url-path", "(/[A-Za-z0-9._~!$&'()*+,;=:@%-]*)+");
    return r;
}

namespace {

// Cholesky factorization of a row-major d x d matrix. False if not PD.
bool cholesky(const std::vector<double>& m, size_t d, std::vector<double>& out)
{
    out.assign(d * d, 0.0);
    for (size_t i = 0; i < d; ++i) {
        for (size_t j = 0; j <= i; ++j) {
            double sum = m[i * d + j];
            for (size_t k = 0; k < j; ++k)
                sum -= out[i * d + k] * out[j * d + k];
            if (i == j) {
                if (sum <= 0.0) return false;
                out[i * d + i] = std::sqrt(sum);
            } else {
                out[i * d + j] = sum / out[j * d + j];
            }
        }
    }
    return true;
}

// Squared Mahalanobis distance via forward substitution on the factor.
double maha_with_chol(const std::vector<double>& chol, size_t d,
                      const std::vector<double>& diff)
{
    double dist = 0.0;
    std::vector<double> y(d, 0.0);
    for (size_t i = 0; i < d; ++i) {
        double sum = diff[i];
        for (size_t k = 0; k < i; ++k)
            sum -= chol[i * d + k] * y[k];
        y[i] = sum / chol[i * d + i];
        dist += y[i] * y[i];
    }
    return dist;
}

double ridge_for(const std::vector<double>& cov, size_t d)
{
    double trace = 0.0;
    for (size_t i = 0; i < d; ++i) trace += cov[i * d + i];
    double lambda = 1e-6 * trace / static_cast<double>(d);
    return lambda > 1e-12 ? lambda : 1e-12;
}

} // namespace

bool StatClassifier::finalize()
{
    if (mean.size() != d || covariance.size() != d * d || threshold <= 0.0)
        return false;
    for (size_t i = 0; i < d; ++i)
        for (size_t j = i + 1; j < d; ++j)
            if (std::fabs(covariance[i * d + j] - covariance[j * d + i]) >
                1e-9 * (1.0 + std::fabs(covariance[i * d + j])))
                return false;
    return cholesky(covariance, d, chol);
}

double StatClassifier::distance(const FeatureVector& x) const
{
    std::vector<double> diff(d);
    for (size_t i = 0; i < d; ++i) diff[i] = x[i] - mean[i];
    return maha_with_chol(chol, d, diff);
}

const char* case_name(const ParamModel& model)
{
    if (std::holds_alternative<Enumeration>(model)) return "enum";
    if (std::holds_alternative<KnownType>(model)) return "known";
    if (std::holds_alternative<StatClassifier>(model)) return "stat";
    return "free";
}

ParamModel fit(std::vector<std::string> samples, const TypeRegistry& registry,
               const FitConfig& config)
{
    if (samples.size() < config.min_samples)
        throw InsufficientSamples("have " + std::to_string(samples.size()) +
                                  " samples, need " + std::to_string(config.min_samples));
    // canonical order: fit must not depend on how the corpus was shuffled
    std::sort(samples.begin(), samples.end());
    const size_t n = samples.size();

    // case 1: enumeration
    std::map<std::string, size_t> counts;
    for (const auto& s : samples) ++counts[s];
    size_t distinct_cap = static_cast<size_t>(
        std::ceil(std::sqrt(static_cast<double>(n))));
    if (distinct_cap < config.enum_cap) distinct_cap = config.enum_cap;
    if (counts.size() <= distinct_cap) {
        bool all_repeat = true;
        for (const auto& [v, c] : counts)
            if (c < 2) { all_repeat = false; break; }
        if (all_repeat) {
            Enumeration e;
            for (const auto& [v, c] : counts) e.values.insert(v);
            return e;
        }
    }

    // case 2: known data type
    for (const auto& entry : registry.entries()) {
        size_t hits = 0;
        for (const auto& s : samples)
            if (entry.pattern.full_match(s)) ++hits;
        if (static_cast<double>(hits) >=
            config.known_frac * static_cast<double>(n)) {
            return KnownType{entry.name, entry.pattern};
        }
    }

    // case 3: statistical classifier, kept only if it explains its own
    // training data under leave-one-out evaluation
    const size_t d = kFeatureCount;
    if (n >= d + 2) {
        std::vector<FeatureVector> feats(n);
        for (size_t i = 0; i < n; ++i) feats[i] = featurize(samples[i]);

        std::vector<double> mean(d, 0.0);
        for (const auto& f : feats)
            for (size_t k = 0; k < d; ++k) mean[k] += f[k];
        for (size_t k = 0; k < d; ++k) mean[k] /= static_cast<double>(n);

        std::vector<double> scatter(d * d, 0.0);
        for (const auto& f : feats) {
            for (size_t a = 0; a < d; ++a)
                for (size_t b = 0; b < d; ++b)
                    scatter[a * d + b] += (f[a] - mean[a]) * (f[b] - mean[b]);
        }

        const double threshold = chi2_quantile(config.conf, static_cast<double>(d));
        size_t passed = 0;
        const double nf = static_cast<double>(n);
        for (size_t i = 0; i < n; ++i) {
            std::vector<double> mu(d), diff_full(d);
            for (size_t k = 0; k < d; ++k) {
                mu[k] = (nf * mean[k] - feats[i][k]) / (nf - 1.0);
                diff_full[k] = feats[i][k] - mean[k];
            }
            std::vector<double> cov(d * d);
            const double w = nf / (nf - 1.0);
            for (size_t a = 0; a < d; ++a)
                for (size_t b = 0; b < d; ++b)
                    cov[a * d + b] = (scatter[a * d + b] -
                                      w * diff_full[a] * diff_full[b]) /
                                     (nf - 2.0);
            double lambda = ridge_for(cov, d);
            for (size_t k = 0; k < d; ++k) cov[k * d + k] += lambda;
            std::vector<double> chol;
            if (!cholesky(cov, d, chol)) continue; // degenerate holdout = fail
            std::vector<double> diff(d);
            for (size_t k = 0; k < d; ++k) diff[k] = feats[i][k] - mu[k];
            if (maha_with_chol(chol, d, diff) <= threshold) ++passed;
        }

        if (static_cast<double>(passed) >= config.self_frac * nf) {
            StatClassifier sc;
            sc.d = d;
            sc.mean = mean;
            sc.covariance.assign(d * d, 0.0);
            for (size_t a = 0; a < d; ++a)
                for (size_t b = 0; b < d; ++b)
                    sc.covariance[a * d + b] = scatter[a * d + b] / (nf - 1.0);
            double lambda = ridge_for(sc.covariance, d);
            for (size_t k = 0; k < d; ++k) sc.covariance[k * d + k] += lambda;
            sc.threshold = threshold;
            if (sc.finalize()) return sc;
        }
    }

    return FreeText{};
}

ValidationResult validate(const ParamModel& model, const Bytes& value)
{
    ValidationResult result;
    if (const auto* e = std::get_if<Enumeration>(&model)) {
        if (!e->values.count(value)) {
            result.accepted = false;
            result.reason = "value \"" + printable(value) + "\" not in enumeration";
        }
        return result;
    }
    if (const auto* k = std::get_if<KnownType>(&model)) {
        if (!k->pattern.full_match(value)) {
            result.accepted = false;
            result.reason = "value \"" + printable(value) + "\" does not match type " +
                            k->type_name;
        }
        return result;
    }
    if (const auto* s = std::get_if<StatClassifier>(&model)) {
        double dist = s->distance(featurize(value));
        result.distance = dist;
        if (dist > s->threshold) {
            result.accepted = false;
            char buf[96];
            std::snprintf(buf, sizeof(buf), "distance %.4g exceeds threshold %.4g",
                          dist, s->threshold);
            result.reason = buf;
        }
        return result;
    }
    return result; // free text accepts everything
}

std::string describe(const ParamModel& model)
{
    if (const auto* e = std::get_if<Enumeration>(&model)) {
        std::string out = "one of {";
        size_t shown = 0;
        for (const auto& v : e->values) {
            if (shown == 12) {
                out += ", … " + std::to_string(e->values.size()) + " values";
                break;
            }
            if (shown++) out += ", ";
            out += printable(v, 24);
        }
        out += "}";
        return out;
    }
    if (const auto* k = std::get_if<KnownType>(&model))
        return k->type_name + " (regex " + k->pattern.source() + ")";
    if (const auto* s = std::get_if<StatClassifier>(&model)) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "statistical classifier (%zu features, threshold %.4f)\n",
                      s->d, s->threshold);
        std::string out = buf;
        for (size_t i = 0; i < s->d; ++i) {
            double sigma = std::sqrt(s->covariance[i * s->d + i]);
            std::snprintf(buf, sizeof(buf), "  %-16s mean %.4f ± %.4f\n",
                          kFeatureNames[i], s->mean[i], sigma);
            out += buf;
        }
        return out;
    }
    return "free text (no constraint)";
}

} // namespace waf
