// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Use-case layer: a finite state automaton constrains the order of modeled
// actions, and the access-control policy tracks which actions the served
// pages actually offered to this user.

#ifndef WAFMODEL_CORE_USECASE_HPP
#define WAFMODEL_CORE_USECASE_HPP

#include "core/decision.hpp"
#include "core/html.hpp"
#include "core/routing.hpp"
#include "core/session.hpp"

namespace waf {

struct FsaStepResult {
    std::string next;
    std::optional<Violation> violation;
};

// Actions outside the alphabet pass through without moving the automaton;
// an alphabet action with no transition from the current state is an
// ordering violation and the state stays put.
FsaStepResult fsa_step(const UseCaseFsa& fsa, const std::string& current,
                       const std::string& action);

// Scans a served HTML page for links and forms, synthesizes a request sketch
// for each, and keeps every sketch that routes to a modeled action. In
// instance-level mode the resolved actuals are pinned.
AllowedSet extract_offered_actions(const ResponseRecord& response, const UrlParts& base,
                                   const DecodeDecisionTree& ddt,
                                   const DecoderRegistry& registry,
                                   const RoutingTable& routing, const ActionCatalog& catalog,
                                   const AccessControlPolicy& policy,
                                   const std::vector<std::pair<std::string, int>>& selectors);

// ok == nullopt. Seed actions always pass; otherwise the instance must be
// covered by an accumulated entry (action-level: name; instance-level: name
// plus every pinned actual equal).
std::optional<Violation> check_allowed(const AllowedSet& allowed,
                                       const ActionInstance& instance,
                                       const AccessControlPolicy& policy);

} // namespace waf

#endif
