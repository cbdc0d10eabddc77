// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// The decode decision tree: which decoders run, in what order, under what
// conditions. Walk one node at a time: apply the node's step, then take the
// first branch whose predicate holds against the tree as it now stands.

#ifndef WAFMODEL_CORE_DECISION_HPP
#define WAFMODEL_CORE_DECISION_HPP

#include <memory>
#include <vector>

#include "core/decoders.hpp"
#include "core/predicate.hpp"
#include "core/violation.hpp"

namespace waf {

struct DecisionNode {
    // A node may carry no step and only branch.
    bool has_step = false;
    std::string decoder;
    NodeAddress target;

    struct Branch {
        Predicate when; // empty predicate = unconditional
        std::unique_ptr<DecisionNode> then;
    };
    std::vector<Branch> branches;
};

struct DecodeDecisionTree {
    std::unique_ptr<DecisionNode> root; // null = bootstrap only
};

struct DecisionOutcome {
    ParseTree tree;
    std::vector<Violation> violations; // one per DecodeFailure
};

DecisionOutcome run_decision_tree(const HttpEnvelope& env, const DecodeDecisionTree& ddt,
                                  const DecoderRegistry& registry);

} // namespace waf

#endif
