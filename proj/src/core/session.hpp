// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Session and flow attributes: named values with a lifecycle. Responses set
// them, requests must present them, actions invalidate them. The same
// mechanism carries data dependencies between actions: an attribute set by
// action A and verified only for action B is exactly "B needs A's output".

#ifndef WAFMODEL_CORE_SESSION_HPP
#define WAFMODEL_CORE_SESSION_HPP

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "core/routing.hpp"
#include "core/usecase_types.hpp"

namespace waf {

// Where to find an attribute value in a response.
struct ResponseLocator {
    enum class Kind { header, set_cookie, body_regex, body_json };
    Kind kind = Kind::header;
    std::string name;    // header / set_cookie
    Regex pattern;       // body_regex, exactly one capture group
    NodeAddress address; // body_json (dotted, 1-based arrays)

    std::vector<Bytes> extract(const ResponseRecord& response) const;
};

// Where the value must appear in a request.
struct RequestLocator {
    enum class Kind { cookie, tree_address };
    Kind kind = Kind::cookie;
    std::string name;    // cookie
    NodeAddress address; // tree_address

    std::optional<Bytes> extract(const ParseTree& tree) const;
};

enum class VerifyScope { all, non_public, non_idempotent, explicit_list };

struct SetRule {
    ResponseLocator locator;
    bool any_action = true;
    std::set<std::string> on_actions;
};

struct VerifyRule {
    RequestLocator locator;
    VerifyScope scope = VerifyScope::all;
    std::set<std::string> explicit_actions;
};

struct InvalidateRule {
    std::set<std::string> on_actions;
    bool clears_all = false; // otherwise clears only this attribute
};

struct AttributeDef {
    std::string name;
    std::optional<SetRule> set_rule;
    std::optional<VerifyRule> verify_rule;
    std::optional<InvalidateRule> invalidate_rule;
};

// Bounded set of currently valid values, FIFO eviction, insertion order kept.
class ValueSet {
public:
    explicit ValueSet(size_t cap = 64) : cap_(cap) {}
    void add(Bytes value);
    bool contains(const Bytes& value) const;
    void clear() { values_.clear(); }
    size_t size() const { return values_.size(); }
    const std::deque<Bytes>& values() const { return values_; }

private:
    size_t cap_;
    std::deque<Bytes> values_;
};

struct SessionState {
    std::string session_key;
    std::map<std::string, ValueSet> attrs; // cleared sets stay present, empty
    std::string fsa_state;                 // empty = FSA start (resolved by caller)
    AllowedSet allowed;
};

// Adds every value the matching set rules extract from the response.
void observe_response(SessionState& state, const std::string& action_name,
                      const ResponseRecord& response,
                      const std::vector<AttributeDef>& defs);

// Verifies attribute presence/validity for the routed action. Pure.
std::vector<Violation> check_request(const SessionState& state,
                                     const ActionInstance& instance,
                                     const ParseTree& tree,
                                     const std::vector<AttributeDef>& defs,
                                     const ActionCatalog& catalog);

// Applies invalidation rules for the executed action.
// Returns true when a clears-all rule fired (session teardown).
bool apply_invalidations(SessionState& state, const std::string& action_name,
                         const std::vector<AttributeDef>& defs);

// Keyed store handing out per-session states with serialized access.
class SessionStore {
public:
    struct Entry {
        std::mutex mu;
        SessionState state;
    };

    std::shared_ptr<Entry> acquire(const std::string& key);
    // Binds an additional key to an existing entry. Used when a response
    // issues the value that keys the session from then on (login sets the
    // cookie under the peer-keyed state; later requests carry the cookie).
    void alias(const std::string& key, std::shared_ptr<Entry> entry);
    size_t size() const;

private:
    mutable std::mutex mu_;
    std::map<std::string, std::shared_ptr<Entry>> entries_;
};

} // namespace waf

#endif
