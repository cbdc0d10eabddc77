// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/usecase.hpp"

namespace waf {

FsaStepResult fsa_step(const UseCaseFsa& fsa, const std::string& current,
                       const std::string& action)
{
    if (fsa.empty() || !fsa.alphabet.count(action))
        return {current, std::nullopt};
    auto it = fsa.transitions.find({current, action});
    if (it == fsa.transitions.end()) {
        return {current,
                Violation{Layer::usecase, "order_violation",
                          "action \"" + action + "\" is not permitted in state \"" +
                              current + "\""}};
    }
    return {it->second, std::nullopt};
}

namespace {

bool selector_match(const std::vector<std::pair<std::string, int>>& selectors,
                    const std::string& host, int port)
{
    for (const auto& [h, p] : selectors)
        if (p == port && ascii_iequals(h, host)) return true;
    return false;
}

std::string form_encode(const std::vector<HtmlFormInput>& inputs)
{
    std::string out;
    for (const auto& input : inputs) {
        if (!out.empty()) out += "&";
        out += percent_encode(input.name) + "=" + percent_encode(input.value);
    }
    return out;
}

HttpEnvelope make_sketch(const std::string& method, const UrlParts& url,
                         const std::string& body, const std::string& content_type)
{
    HttpEnvelope env;
    env.method = method;
    env.target = url.target;
    env.version = HttpVersion::v1_1;
    std::string host = url.host;
    if (url.port != 80) host += ":" + std::to_string(url.port);
    env.headers.add("Host", host);
    if (!body.empty() || method == "POST") {
        env.headers.add("Content-Type", content_type);
        env.headers.add("Content-Length", std::to_string(body.size()));
        env.body = body;
    }
    return env;
}

void try_sketch(const HttpEnvelope& sketch, const DecodeDecisionTree& ddt,
                const DecoderRegistry& registry, const RoutingTable& routing,
                const ActionCatalog& catalog, const AccessControlPolicy& policy,
                AllowedSet& delta)
{
    DecisionOutcome decoded = run_decision_tree(sketch, ddt, registry);
    RouteOutcome routed = route(decoded.tree, routing, catalog);
    if (!routed.instance) return; // page junk and external noise are not offers
    AllowedEntry entry;
    entry.action = routed.instance->action;
    if (policy.mode == AccessControlMode::instance_level) {
        for (const auto& [param, value] : routed.instance->actuals)
            entry.pinned[param] = value;
    }
    delta.entries.insert(std::move(entry));
}

} // namespace

AllowedSet extract_offered_actions(const ResponseRecord& response, const UrlParts& base,
                                   const DecodeDecisionTree& ddt,
                                   const DecoderRegistry& registry,
                                   const RoutingTable& routing, const ActionCatalog& catalog,
                                   const AccessControlPolicy& policy,
                                   const std::vector<std::pair<std::string, int>>& selectors)
{
    AllowedSet delta;
    if (policy.mode == AccessControlMode::off) return delta;
    auto ct = response.headers.get("content-type");
    if (!ct || !ascii_iequals(ct->substr(0, 9), "text/html")) return delta;

    HtmlScan scan = scan_html(response.body);

    if (policy.parse_links) {
        for (const auto& link : scan.links) {
            auto url = resolve_url(base, link.href);
            if (!url || !selector_match(selectors, url->host, url->port)) continue;
            try_sketch(make_sketch("GET", *url, "", ""), ddt, registry, routing, catalog,
                       policy, delta);
        }
    }
    if (policy.parse_forms) {
        for (const auto& form : scan.forms) {
            auto url = resolve_url(base, form.action.empty() ? base.target : form.action);
            if (!url || !selector_match(selectors, url->host, url->port)) continue;
            std::string encoded = form_encode(form.inputs);
            if (form.method == "GET") {
                UrlParts with_query = *url;
                if (!encoded.empty()) {
                    size_t q = with_query.target.find('?');
                    if (q != std::string::npos) with_query.target.resize(q);
                    with_query.target += "?" + encoded;
                }
                try_sketch(make_sketch("GET", with_query, "", ""), ddt, registry, routing,
                           catalog, policy, delta);
            } else {
                try_sketch(make_sketch(form.method, *url, encoded,
                                       "application/x-www-form-urlencoded"),
                           ddt, registry, routing, catalog, policy, delta);
            }
        }
    }
    return delta;
}

std::optional<Violation> check_allowed(const AllowedSet& allowed,
                                       const ActionInstance& instance,
                                       const AccessControlPolicy& policy)
{
    if (policy.mode == AccessControlMode::off) return std::nullopt;
    if (policy.seed_actions.count(instance.action)) return std::nullopt;

    for (const auto& entry : allowed.entries) {
        if (entry.action != instance.action) continue;
        if (policy.mode == AccessControlMode::action_level) return std::nullopt;
        bool all_equal = true;
        for (const auto& [param, pinned_value] : entry.pinned) {
            auto it = instance.actuals.find(param);
            if (it == instance.actuals.end() || it->second != pinned_value) {
                all_equal = false;
                break;
            }
        }
        if (all_equal) return std::nullopt;
    }
    return Violation{Layer::usecase, "access_violation",
                     "action \"" + instance.action +
                         "\" was not offered to this session"};
}

} // namespace waf
