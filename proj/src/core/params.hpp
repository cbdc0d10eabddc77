// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Per-parameter syntax models, fitted from observed values. Four cases, tried
// in order: a closed enumeration, a known data type from the registry, a
// multivariate-normal classifier over string-shape features, and free text
// (no constraint). Case selection is deterministic for a given sample set.

#ifndef WAFMODEL_CORE_PARAMS_HPP
#define WAFMODEL_CORE_PARAMS_HPP

#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "core/predicate.hpp"

namespace waf {

// String-shape features: length in code points, digit/letter/punctuation/
// other fractions, Shannon entropy of the character distribution in bits.
// The four fractions sum to 1 for non-empty input; the empty string maps to
// the zero vector by convention.
inline constexpr size_t kFeatureCount = 6;
inline constexpr const char* kFeatureVersion = "string-shape/1";
inline constexpr const char* kFeatureNames[kFeatureCount] = {
    "length", "digit fraction", "letter fraction",
    "punct fraction", "other fraction", "entropy",
};

using FeatureVector = std::array<double, kFeatureCount>;

FeatureVector featurize(const Bytes& value);

// Upper quantile of the chi-square distribution with k degrees of freedom.
double chi2_quantile(double p, double k);

struct TypeEntry {
    std::string name;
    Regex pattern; // anchored
};

class TypeRegistry {
public:
    // integer, decimal, hex-token, uuid, email, iso-date, phone, url-path
    // (trial order; iso-date precedes phone so dates do not classify as
    // phone numbers).
    static TypeRegistry built_in();

    void add(std::string name, const std::string& pattern_source);
    bool remove(const std::string& name);
    const std::vector<TypeEntry>& entries() const { return entries_; }
    const TypeEntry* find(const std::string& name) const;

private:
    std::vector<TypeEntry> entries_;
};

struct Enumeration {
    std::set<std::string> values;
};

struct KnownType {
    std::string type_name;
    Regex pattern;
};

struct StatClassifier {
    std::vector<double> mean;       // d
    std::vector<double> covariance; // d x d row-major, ridge-regularized
    double threshold = 0.0;         // squared Mahalanobis bound
    size_t d = kFeatureCount;
    std::string feature_version = kFeatureVersion;

    // lower-triangular Cholesky factor of the covariance; set by finalize()
    std::vector<double> chol;

    // Computes the Cholesky factor. False when the covariance is not
    // symmetric positive-definite.
    bool finalize();
    double distance(const FeatureVector& x) const;
};

struct FreeText {};

using ParamModel = std::variant<Enumeration, KnownType, StatClassifier, FreeText>;

const char* case_name(const ParamModel& model); // "enum" "known" "stat" "free"

struct FitConfig {
    size_t min_samples = 50;
    size_t enum_cap = 10;
    double known_frac = 0.99;
    double self_frac = 0.95;
    double conf = 0.999;
};

struct InsufficientSamples : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Case selection:
//   1. Enumeration:    few distinct values, each seen at least twice
//   2. KnownType:      first registry pattern matching >= known_frac of samples
//   3. StatClassifier: Gaussian over features, kept only if leave-one-out
//                       evaluation explains >= self_frac of the samples
//   4. FreeText
ParamModel fit(std::vector<std::string> samples, const TypeRegistry& registry,
               const FitConfig& config);

struct ValidationResult {
    bool accepted = true;
    std::string reason;             // set on reject
    std::optional<double> distance; // stat case only
};

ValidationResult validate(const ParamModel& model, const Bytes& value);

// Human-readable model summary (enumeration values, type name and regex,
// per-feature mean and sigma).
std::string describe(const ParamModel& model);

} // namespace waf

#endif
