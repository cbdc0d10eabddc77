// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WAFMODEL_CORE_USECASE_TYPES_HPP
#define WAFMODEL_CORE_USECASE_TYPES_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace waf {

// Deterministic automaton over action names. Actions outside the alphabet do
// not constrain ordering and leave the state untouched.
struct UseCaseFsa {
    std::set<std::string> states;
    std::string start;
    std::map<std::pair<std::string, std::string>, std::string> transitions;
    std::set<std::string> alphabet;

    bool empty() const { return states.empty(); }
};

enum class AccessControlMode { off, action_level, instance_level };

struct AccessControlPolicy {
    AccessControlMode mode = AccessControlMode::off;
    std::set<std::string> seed_actions; // always allowed (entry pages)
    bool parse_links = true;
    bool parse_forms = true;
};

// One offered action: name plus, in instance-level mode, the actuals the
// offering page pinned.
struct AllowedEntry {
    std::string action;
    std::map<std::string, std::string> pinned;

    bool operator<(const AllowedEntry& o) const
    {
        if (action != o.action) return action < o.action;
        return pinned < o.pinned;
    }
    bool operator==(const AllowedEntry&) const = default;
};

struct AllowedSet {
    std::set<AllowedEntry> entries;

    void merge(const AllowedSet& delta)
    {
        entries.insert(delta.entries.begin(), delta.entries.end());
    }
    void clear() { entries.clear(); }
};

} // namespace waf

#endif
