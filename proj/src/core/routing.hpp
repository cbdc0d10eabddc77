// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Decision-list routing: an ordered rule list maps a parse tree to an action
// instance with bound actual parameters. First full match wins; ordering is
// operator-controlled and significant.

#ifndef WAFMODEL_CORE_ROUTING_HPP
#define WAFMODEL_CORE_ROUTING_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/predicate.hpp"
#include "core/violation.hpp"

namespace waf {

struct ParamSpec {
    std::string model_ref; // empty = unmodeled (free text)
    bool required = true;

    bool operator==(const ParamSpec&) const = default;
};

struct ActionSpec {
    std::string name;
    bool idempotent = true;
    bool is_public = true; // reachable without a session
    std::map<std::string, ParamSpec> params;

    bool operator==(const ActionSpec&) const = default;
};

// Catalog of actions, lookup by name.
class ActionCatalog {
public:
    ActionCatalog() = default;
    explicit ActionCatalog(std::vector<ActionSpec> actions);
    const ActionSpec* find(const std::string& name) const;
    ActionSpec* find_mutable(const std::string& name);
    const std::vector<ActionSpec>& actions() const { return actions_; }

private:
    std::vector<ActionSpec> actions_;
};

struct RouteRule {
    Predicate predicate;
    std::string action;
    std::map<std::string, NodeAddress> bindings; // param name -> tree address
};

struct RoutingTable {
    std::vector<RouteRule> rules;
};

struct ActionInstance {
    std::string action;
    std::map<std::string, Bytes> actuals;
    size_t rule_index = 0; // provenance for explain

    bool operator==(const ActionInstance&) const = default;
};

struct RouteOutcome {
    std::optional<ActionInstance> instance; // nullopt = NoRoute
    std::vector<Violation> violations;      // binding failures on matched rules
};

// FreeTextLookup answers "may this param bind an interior node?": only
// params whose model is free text take the canonical subtree rendering.
using FreeTextLookup = bool (*)(const void* ctx, const std::string& action,
                                const std::string& param);

// First rule whose predicate holds wins. A matched rule whose required
// binding resolves to nothing (or to an interior node for a non-free-text
// param) is recorded as a rule_binding_failure and the scan continues.
RouteOutcome route(const ParseTree& tree, const RoutingTable& table,
                   const ActionCatalog& catalog,
                   FreeTextLookup free_text = nullptr, const void* free_text_ctx = nullptr);

// Static consistency: unresolved action names, bindings to undeclared params.
std::vector<std::string> validate_table(const RoutingTable& table,
                                        const ActionCatalog& catalog);

// Operator-facing trace: per evaluated rule the predicate outcome with the
// first failing atom; rules after the first full match are not evaluated.
std::string explain_route(const ParseTree& tree, const RoutingTable& table,
                          const ActionCatalog& catalog);

} // namespace waf

#endif
