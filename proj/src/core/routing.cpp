// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/routing.hpp"

namespace waf {

ActionCatalog::ActionCatalog(std::vector<ActionSpec> actions)
    : actions_(std::move(actions))
{
}

const ActionSpec* ActionCatalog::find(const std::string& name) const
{
    for (const auto& a : actions_)
        if (a.name == name) return &a;
    return nullptr;
}

ActionSpec* ActionCatalog::find_mutable(const std::string& name)
{
    for (auto& a : actions_)
        if (a.name == name) return &a;
    return nullptr;
}

RouteOutcome route(const ParseTree& tree, const RoutingTable& table,
                   const ActionCatalog& catalog,
                   FreeTextLookup free_text, const void* free_text_ctx)
{
    RouteOutcome out;
    for (size_t i = 0; i < table.rules.size(); ++i) {
        const RouteRule& rule = table.rules[i];
        if (!rule.predicate.eval(tree)) continue;

        const ActionSpec* spec = catalog.find(rule.action);
        if (!spec) {
            // validated at load; reachable only through hand-built tables
            out.violations.push_back({Layer::routing, "rule_binding_failure",
                                      "rule " + std::to_string(i + 1) +
                                          " names unknown action '" + rule.action + "'"});
            continue;
        }

        ActionInstance instance;
        instance.action = rule.action;
        instance.rule_index = i;
        bool bind_failed = false;
        for (const auto& [param, addr] : rule.bindings) {
            const ParseNode* node = resolve(tree, addr);
            auto pit = spec->params.find(param);
            bool required = pit == spec->params.end() ? true : pit->second.required;
            if (!node) {
                if (required) {
                    out.violations.push_back(
                        {Layer::routing, "rule_binding_failure",
                         "rule " + std::to_string(i + 1) + ": required param '" + param +
                             "' has no node at " + addr.to_string()});
                    bind_failed = true;
                    break;
                }
                continue; // optional param simply absent
            }
            if (node->is_leaf()) {
                instance.actuals[param] = node->value;
            } else if (free_text && free_text(free_text_ctx, rule.action, param)) {
                // free-text params may bind structure; canonical rendering is the value
                instance.actuals[param] = render_subtree(*node);
            } else {
                out.violations.push_back(
                    {Layer::routing, "rule_binding_failure",
                     "rule " + std::to_string(i + 1) + ": param '" + param +
                         "' binds interior node " + addr.to_string()});
                bind_failed = true;
                break;
            }
        }
        if (bind_failed) continue;
        out.instance = std::move(instance);
        return out;
    }
    return out; // NoRoute
}

std::vector<std::string> validate_table(const RoutingTable& table,
                                        const ActionCatalog& catalog)
{
    std::vector<std::string> defects;
    for (size_t i = 0; i < table.rules.size(); ++i) {
        const RouteRule& rule = table.rules[i];
        const ActionSpec* spec = catalog.find(rule.action);
        if (!spec) {
            defects.push_back("rule " + std::to_string(i + 1) + ": unknown action '" +
                              rule.action + "'");
            continue;
        }
        for (const auto& [param, addr] : rule.bindings) {
            if (!spec->params.count(param))
                defects.push_back("rule " + std::to_string(i + 1) + ": binding for '" +
                                  param + "' not declared by action '" + rule.action + "'");
        }
    }
    return defects;
}

std::string explain_route(const ParseTree& tree, const RoutingTable& table,
                          const ActionCatalog& catalog)
{
    std::string out;
    if (table.rules.empty()) return "no rules\n";
    for (size_t i = 0; i < table.rules.size(); ++i) {
        const RouteRule& rule = table.rules[i];
        out += "rule " + std::to_string(i + 1) + " [" + rule.action + "]: ";
        auto failed = rule.predicate.first_failing_atom(tree);
        if (!failed) {
            out += "MATCH";
            if (!rule.predicate.atoms().empty())
                out += " (" + std::to_string(rule.predicate.atoms().size()) + " atoms)";
            out += "\n";
            RoutingTable single;
            single.rules.push_back(rule);
            RouteOutcome o = route(tree, single, catalog);
            if (o.instance) {
                for (const auto& [param, value] : o.instance->actuals)
                    out += "  " + param + " = \"" + printable(value) + "\"\n";
                out += "-> action \"" + rule.action + "\"\n";
                return out;
            }
            for (const auto& v : o.violations)
                out += "  binding failed: " + v.detail + "\n";
            continue;
        }
        out += "no match, first failing atom: " +
               rule.predicate.atoms()[*failed].to_string() + "\n";
    }
    out += "-> no route\n";
    return out;
}

} // namespace waf
