// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/session.hpp"

#include <json.hpp>

namespace waf {

namespace {

// "name=value; Path=/" -> value when the cookie name matches
std::optional<Bytes> set_cookie_value(std::string_view header, std::string_view name)
{
    size_t eq = header.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    std::string_view n = header.substr(0, eq);
    while (!n.empty() && (n.front() == ' ' || n.front() == '\t')) n.remove_prefix(1);
    while (!n.empty() && (n.back() == ' ' || n.back() == '\t')) n.remove_suffix(1);
    if (n != name) return std::nullopt;
    std::string_view rest = header.substr(eq + 1);
    size_t semi = rest.find(';');
    if (semi != std::string_view::npos) rest = rest.substr(0, semi);
    return Bytes(rest);
}

std::optional<Bytes> json_at_address(const Bytes& body, const NodeAddress& addr)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(body);
    } catch (const nlohmann::json::exception&) {
        return std::nullopt;
    }
    const nlohmann::json* node = &j;
    for (const auto& seg : addr.segments()) {
        if (node->is_object()) {
            auto it = node->find(seg);
            if (it == node->end()) return std::nullopt;
            node = &*it;
        } else if (node->is_array()) {
            size_t idx = 0;
            for (char c : seg) {
                if (c < '0' || c > '9') return std::nullopt;
                idx = idx * 10 + static_cast<size_t>(c - '0');
            }
            if (idx < 1 || idx > node->size()) return std::nullopt;
            node = &(*node)[idx - 1];
        } else {
            return std::nullopt;
        }
    }
    if (node->is_string()) return node->get<std::string>();
    if (node->is_structured()) return std::nullopt;
    return node->dump();
}

} // namespace

std::vector<Bytes> ResponseLocator::extract(const ResponseRecord& response) const
{
    std::vector<Bytes> out;
    switch (kind) {
    case Kind::header:
        for (auto v : response.headers.get_all(name))
            out.emplace_back(v);
        break;
    case Kind::set_cookie:
        for (auto v : response.headers.get_all("set-cookie"))
            if (auto value = set_cookie_value(v, name))
                out.push_back(std::move(*value));
        break;
    case Kind::body_regex:
        for (auto& v : pattern.capture_all(response.body))
            out.push_back(std::move(v));
        break;
    case Kind::body_json:
        if (auto value = json_at_address(response.body, address))
            out.push_back(std::move(*value));
        break;
    }
    return out;
}

std::optional<Bytes> RequestLocator::extract(const ParseTree& tree) const
{
    const ParseNode* node = nullptr;
    if (kind == Kind::cookie) {
        NodeAddress addr(std::vector<std::string>{"cookie", name});
        node = resolve(tree, addr);
        // duplicated cookie names group numerically; take the first sent
        if (node && !node->is_leaf()) node = node->child("1");
    } else {
        node = resolve(tree, address);
    }
    if (!node || !node->is_leaf()) return std::nullopt;
    return node->value;
}

void ValueSet::add(Bytes value)
{
    for (const auto& v : values_)
        if (v == value) return;
    values_.push_back(std::move(value));
    while (values_.size() > cap_)
        values_.pop_front();
}

bool ValueSet::contains(const Bytes& value) const
{
    for (const auto& v : values_)
        if (v == value) return true;
    return false;
}

void observe_response(SessionState& state, const std::string& action_name,
                      const ResponseRecord& response,
                      const std::vector<AttributeDef>& defs)
{
    for (const auto& def : defs) {
        if (!def.set_rule) continue;
        const SetRule& rule = *def.set_rule;
        if (!rule.any_action && !rule.on_actions.count(action_name)) continue;
        auto values = rule.locator.extract(response);
        if (values.empty()) continue;
        auto [it, inserted] = state.attrs.try_emplace(def.name);
        for (auto& v : values)
            it->second.add(std::move(v));
    }
}

std::vector<Violation> check_request(const SessionState& state,
                                     const ActionInstance& instance,
                                     const ParseTree& tree,
                                     const std::vector<AttributeDef>& defs,
                                     const ActionCatalog& catalog)
{
    std::vector<Violation> out;
    const ActionSpec* spec = catalog.find(instance.action);
    for (const auto& def : defs) {
        if (!def.verify_rule) continue;
        const VerifyRule& rule = *def.verify_rule;
        bool applies = false;
        switch (rule.scope) {
        case VerifyScope::all:
            applies = true;
            break;
        case VerifyScope::non_public:
            applies = spec && !spec->is_public;
            break;
        case VerifyScope::non_idempotent:
            applies = spec && !spec->idempotent;
            break;
        case VerifyScope::explicit_list:
            applies = rule.explicit_actions.count(instance.action) > 0;
            break;
        }
        if (!applies) continue;

        auto value = rule.locator.extract(tree);
        if (!value) {
            out.push_back({Layer::session, "attribute_missing",
                           "attribute \"" + def.name + "\" required by action \"" +
                               instance.action + "\" is not present in the request"});
            continue;
        }
        auto it = state.attrs.find(def.name);
        if (it == state.attrs.end() || !it->second.contains(*value)) {
            out.push_back({Layer::session, "attribute_invalid",
                           "attribute \"" + def.name + "\" value \"" +
                               printable(*value) + "\" is not currently valid"});
        }
    }
    return out;
}

bool apply_invalidations(SessionState& state, const std::string& action_name,
                         const std::vector<AttributeDef>& defs)
{
    bool cleared_all = false;
    for (const auto& def : defs) {
        if (!def.invalidate_rule) continue;
        const InvalidateRule& rule = *def.invalidate_rule;
        if (!rule.on_actions.count(action_name)) continue;
        if (rule.clears_all) {
            for (auto& [name, set] : state.attrs)
                set.clear();
            cleared_all = true;
        } else {
            auto it = state.attrs.find(def.name);
            if (it != state.attrs.end()) it->second.clear();
            else state.attrs.try_emplace(def.name); // cleared sets are empty, not absent
        }
    }
    return cleared_all;
}

std::shared_ptr<SessionStore::Entry> SessionStore::acquire(const std::string& key)
{
    std::lock_guard<std::mutex> lock(mu_);
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        auto entry = std::make_shared<Entry>();
        entry->state.session_key = key;
        it = entries_.emplace(key, std::move(entry)).first;
    }
    return it->second;
}

void SessionStore::alias(const std::string& key, std::shared_ptr<Entry> entry)
{
    std::lock_guard<std::mutex> lock(mu_);
    entries_.try_emplace(key, std::move(entry));
}

size_t SessionStore::size() const
{
    std::lock_guard<std::mutex> lock(mu_);
    return entries_.size();
}

} // namespace waf
