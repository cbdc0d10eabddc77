// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/decision.hpp"

namespace waf {

DecisionOutcome run_decision_tree(const HttpEnvelope& env, const DecodeDecisionTree& ddt,
                                  const DecoderRegistry& registry)
{
    DecisionOutcome out{bootstrap_tree(env), {}};

    const DecisionNode* node = ddt.root.get();
    while (node) {
        if (node->has_step) {
            DecodeFailure failure;
            DecodeStatus status =
                apply_decoder(out.tree, node->decoder, node->target, registry, &failure);
            if (status == DecodeStatus::failed) {
                out.violations.push_back(
                    {Layer::syntax, "decode_failure",
                     failure.decoder + " at " + failure.target + ": " + failure.reason});
            }
        }
        const DecisionNode* next = nullptr;
        for (const auto& branch : node->branches) {
            if (branch.when.eval(out.tree)) {
                next = branch.then.get();
                break;
            }
        }
        node = next;
    }
    return out;
}

} // namespace waf
