// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Layered evaluation of one exchange against the model set: app selection,
// decode, routing, parameter validation, session attributes, use-case FSA and
// access control. Violations accumulate; the verdict diagnoses everything
// wrong with a request, not just the first thing.

#ifndef WAFMODEL_CORE_ENGINE_HPP
#define WAFMODEL_CORE_ENGINE_HPP

#include "core/corpus.hpp"
#include "core/model.hpp"

namespace waf {

enum class Decision { allow, block };

struct Verdict {
    std::string exchange_id;
    std::string app_id; // empty = unknown application
    std::optional<ActionInstance> action;
    std::vector<Violation> violations;
    Decision decision = Decision::allow;

    std::string to_json_line() const;
};

// Evaluates the exchange and applies its state effects (attribute sets,
// FSA movement, invalidations, offered-action extraction) to the session
// store. Never throws: parse failures become syntax verdicts.
Verdict evaluate(const ModelSet& modelset, const RawExchange& exchange,
                 SessionStore& store,
                 const DecoderRegistry& registry = DecoderRegistry::built_in());

// The same pipeline in pieces, for callers (the gateway) that must hold the
// session lock across an upstream round-trip.

struct PreparedExchange {
    Verdict verdict; // pre-filled with syntax violations on failure
    bool envelope_ok = false;
    HttpEnvelope envelope;
    const AppModel* app = nullptr; // null = unknown application
    std::string host;
    int port = 0;
};

// Strict parse + application selection. Touches no session state.
PreparedExchange prepare_exchange(const ModelSet& modelset, const RawExchange& exchange);

// Request side: decode, route, params, attributes, FSA, access control,
// invalidations. Appends to verdict.violations and sets verdict.action.
// Caller holds the session entry lock.
void evaluate_request_phase(const AppModel& app, const HttpEnvelope& env,
                            SessionState& state, Verdict& verdict,
                            const DecoderRegistry& registry);

// Response side: attribute set rules and offered-action extraction.
// action_name may be empty (unrouted exchange). Caller holds the lock.
void apply_response_phase(const AppModel& app, const HttpEnvelope& request_env,
                          const std::string& host, int port,
                          const std::string& action_name, const ResponseRecord& response,
                          SessionState& state, const DecoderRegistry& registry);

Decision decide(const std::vector<Violation>& violations, const EnginePolicy& policy);

// Stateless single-request diagnosis: parse tree render, routing trace and
// per-parameter validation results.
std::string explain(const ModelSet& modelset, const Bytes& request_bytes,
                    const DecoderRegistry& registry = DecoderRegistry::built_in());

struct LearnReport {
    struct Group {
        std::string app_id;
        std::string action;
        std::string param;
        size_t samples = 0;
        std::string chosen; // "enum" "known" "stat" "free" or "skipped"
        std::string note;
    };
    std::vector<Group> groups;
    size_t exchanges_seen = 0;
    size_t exchanges_unroutable = 0;
    std::vector<std::string> warnings;

    std::string to_json() const;
};

struct LearnOutcome {
    ModelSet model;
    LearnReport report;
};

// Replays the corpus through the existing model, groups actual values by
// (app, action, param) and fits a parameter model per group that reaches
// min_samples. Groups below the threshold fall back to free text with a
// warning. Everything else in the model is untouched.
LearnOutcome learn_params(const ModelSet& modelset,
                          const std::vector<RawExchange>& corpus,
                          const TypeRegistry& registry = TypeRegistry::built_in(),
                          const FitConfig& config = FitConfig{},
                          const DecoderRegistry& decoders = DecoderRegistry::built_in());

} // namespace waf

#endif
