// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/engine.hpp"

#include <json.hpp>

namespace waf {

using ordered_json = nlohmann::ordered_json;

namespace {

bool is_free_text_param(const void* ctx, const std::string& action,
                        const std::string& param)
{
    return static_cast<const AppModel*>(ctx)->param_is_free_text(action, param);
}

void validate_params(const AppModel& app, const ActionInstance& instance,
                     std::vector<Violation>& out)
{
    for (const auto& [param, value] : instance.actuals) {
        const ParamModel* model = app.model_for(instance.action, param);
        if (!model) continue; // unmodeled = free text
        ValidationResult r = validate(*model, value);
        if (!r.accepted)
            out.push_back({Layer::params, "param_invalid",
                           "param '" + param + "' of action '" + instance.action +
                               "': " + r.reason});
    }
}

} // namespace

Decision decide(const std::vector<Violation>& violations, const EnginePolicy& policy)
{
    for (const auto& v : violations)
        if (policy.block_layers.count(v.layer)) return Decision::block;
    return Decision::allow;
}

PreparedExchange prepare_exchange(const ModelSet& modelset, const RawExchange& exchange)
{
    PreparedExchange prepared;
    prepared.verdict.exchange_id = exchange.id;
    try {
        prepared.envelope = parse_envelope(exchange.request_bytes);
        prepared.envelope_ok = true;
    } catch (const MalformedRequest& e) {
        prepared.verdict.violations.push_back(
            {Layer::syntax, "malformed_request", e.what()});
        return prepared;
    }

    auto hp = host_port(prepared.envelope);
    prepared.app = hp ? modelset.select_app(hp->first, hp->second) : nullptr;
    if (!prepared.app) {
        prepared.verdict.violations.push_back(
            {Layer::syntax, "unknown_application",
             hp ? "no application modeled for " + hp->first + ":" +
                      std::to_string(hp->second)
                : "request carries no usable Host header"});
        return prepared;
    }
    prepared.host = hp->first;
    prepared.port = hp->second;
    prepared.verdict.app_id = prepared.app->app_id;
    return prepared;
}

void evaluate_request_phase(const AppModel& app, const HttpEnvelope& env,
                            SessionState& state, Verdict& verdict,
                            const DecoderRegistry& registry)
{
    if (state.fsa_state.empty() && !app.fsa.empty())
        state.fsa_state = app.fsa.start;

    DecisionOutcome decoded = run_decision_tree(env, app.decode_tree, registry);
    for (auto& v : decoded.violations) verdict.violations.push_back(std::move(v));

    RouteOutcome routed =
        route(decoded.tree, app.routing, app.catalog, &is_free_text_param, &app);
    for (auto& v : routed.violations) verdict.violations.push_back(std::move(v));

    if (!routed.instance) {
        verdict.violations.push_back(
            {Layer::routing, "no_route",
             "no routing rule matched; request is outside the modeled application"});
        return;
    }
    verdict.action = *routed.instance;
    const std::string& action_name = routed.instance->action;

    validate_params(app, *routed.instance, verdict.violations);

    for (auto& v : check_request(state, *routed.instance, decoded.tree, app.attributes,
                                 app.catalog))
        verdict.violations.push_back(std::move(v));

    if (!app.fsa.empty()) {
        FsaStepResult step = fsa_step(app.fsa, state.fsa_state, action_name);
        if (step.violation) verdict.violations.push_back(std::move(*step.violation));
        state.fsa_state = step.next;
    }
    if (app.ac.mode != AccessControlMode::off) {
        if (auto v = check_allowed(state.allowed, *routed.instance, app.ac))
            verdict.violations.push_back(std::move(*v));
    }

    if (apply_invalidations(state, action_name, app.attributes)) {
        // full teardown: the session starts over
        if (!app.fsa.empty()) state.fsa_state = app.fsa.start;
        state.allowed.clear();
    }
}

void apply_response_phase(const AppModel& app, const HttpEnvelope& request_env,
                          const std::string& host, int port,
                          const std::string& action_name, const ResponseRecord& response,
                          SessionState& state, const DecoderRegistry& registry)
{
    observe_response(state, action_name, response, app.attributes);
    if (app.ac.mode != AccessControlMode::off) {
        UrlParts base;
        base.scheme = "http";
        base.host = host;
        base.port = port;
        base.target = request_env.target;
        state.allowed.merge(extract_offered_actions(response, base, app.decode_tree,
                                                    registry, app.routing, app.catalog,
                                                    app.ac, app.selectors));
    }
}

Verdict evaluate(const ModelSet& modelset, const RawExchange& exchange,
                 SessionStore& store, const DecoderRegistry& registry)
{
    PreparedExchange prepared = prepare_exchange(modelset, exchange);
    if (!prepared.app) {
        prepared.verdict.decision = decide(prepared.verdict.violations, modelset.policy);
        return prepared.verdict;
    }
    const AppModel& app = *prepared.app;

    auto entry = store.acquire(app.app_id + "|" + exchange.client_id);
    std::lock_guard<std::mutex> lock(entry->mu);
    SessionState& state = entry->state;

    evaluate_request_phase(app, prepared.envelope, state, prepared.verdict, registry);

    if (exchange.response) {
        apply_response_phase(app, prepared.envelope, prepared.host, prepared.port,
                             prepared.verdict.action ? prepared.verdict.action->action
                                                     : std::string(),
                             *exchange.response, state, registry);
    }

    prepared.verdict.decision = decide(prepared.verdict.violations, modelset.policy);
    return prepared.verdict;
}

std::string Verdict::to_json_line() const
{
    ordered_json j;
    j["exchange_id"] = exchange_id;
    j["app_id"] = app_id.empty() ? ordered_json() : ordered_json(app_id);
    if (action) {
        ordered_json a;
        a["name"] = action->action;
        ordered_json actuals = ordered_json::object();
        for (const auto& [param, value] : action->actuals) {
            if (utf8_valid(value)) actuals[param] = value;
            else actuals[param] = printable(value, 256);
        }
        a["actuals"] = std::move(actuals);
        a["rule_index"] = action->rule_index;
        j["action"] = std::move(a);
    } else {
        j["action"] = nullptr;
    }
    ordered_json vs = ordered_json::array();
    for (const auto& v : violations) {
        ordered_json item;
        item["layer"] = std::string(layer_name(v.layer));
        item["code"] = v.code;
        item["detail"] = v.detail;
        vs.push_back(std::move(item));
    }
    j["violations"] = std::move(vs);
    j["decision"] = decision == Decision::block ? "block" : "allow";
    return j.dump();
}

std::string explain(const ModelSet& modelset, const Bytes& request_bytes,
                    const DecoderRegistry& registry)
{
    std::string out;
    HttpEnvelope env;
    try {
        env = parse_envelope(request_bytes);
    } catch (const MalformedRequest& e) {
        return std::string("request rejected by the strict parser: ") + e.what() + "\n";
    }

    auto hp = host_port(env);
    const AppModel* app = hp ? modelset.select_app(hp->first, hp->second) : nullptr;
    if (!app) {
        out += hp ? "no application modeled for " + hp->first + ":" +
                        std::to_string(hp->second) + "\n"
                  : "request carries no usable Host header\n";
        out += "\nbootstrap parse tree:\n";
        out += render_tree(bootstrap_tree(env));
        return out;
    }

    out += "application: " + app->app_id + "\n\nparse tree:\n";
    DecisionOutcome decoded = run_decision_tree(env, app->decode_tree, registry);
    out += render_tree(decoded.tree);
    for (const auto& v : decoded.violations)
        out += "syntax violation: " + v.detail + "\n";

    out += "\nrouting:\n";
    out += explain_route(decoded.tree, app->routing, app->catalog);

    RouteOutcome routed =
        route(decoded.tree, app->routing, app->catalog, &is_free_text_param, app);
    if (routed.instance) {
        out += "\nparameters:\n";
        if (routed.instance->actuals.empty()) out += "  (none bound)\n";
        for (const auto& [param, value] : routed.instance->actuals) {
            const ParamModel* model = app->model_for(routed.instance->action, param);
            out += "  " + param + " = \"" + printable(value) + "\": ";
            if (!model) {
                out += "unmodeled (accepted)\n";
                continue;
            }
            ValidationResult r = validate(*model, value);
            out += r.accepted ? "ok" : "REJECTED, " + r.reason;
            out += "  [" + std::string(case_name(*model)) + ": " + describe(*model) + "]\n";
        }
    }
    return out;
}

std::string LearnReport::to_json() const
{
    ordered_json j;
    j["exchanges_seen"] = exchanges_seen;
    j["exchanges_unroutable"] = exchanges_unroutable;
    ordered_json gs = ordered_json::array();
    for (const auto& g : groups) {
        ordered_json item;
        item["app_id"] = g.app_id;
        item["action"] = g.action;
        item["param"] = g.param;
        item["samples"] = g.samples;
        item["chosen"] = g.chosen;
        if (!g.note.empty()) item["note"] = g.note;
        gs.push_back(std::move(item));
    }
    j["groups"] = std::move(gs);
    j["warnings"] = warnings;
    return j.dump(2);
}

LearnOutcome learn_params(const ModelSet& modelset, const std::vector<RawExchange>& corpus,
                          const TypeRegistry& registry, const FitConfig& config,
                          const DecoderRegistry& decoders)
{
    LearnOutcome outcome{clone_model(modelset), {}};
    LearnReport& report = outcome.report;

    // (app, action, param) -> observed actuals, in corpus order
    std::map<std::tuple<std::string, std::string, std::string>, std::vector<std::string>>
        groups;

    for (const auto& exchange : corpus) {
        ++report.exchanges_seen;
        HttpEnvelope env;
        try {
            env = parse_envelope(exchange.request_bytes);
        } catch (const MalformedRequest&) {
            ++report.exchanges_unroutable;
            continue;
        }
        auto hp = host_port(env);
        const AppModel* app = hp ? outcome.model.select_app(hp->first, hp->second) : nullptr;
        if (!app) {
            ++report.exchanges_unroutable;
            continue;
        }
        DecisionOutcome decoded = run_decision_tree(env, app->decode_tree, decoders);
        RouteOutcome routed =
            route(decoded.tree, app->routing, app->catalog, &is_free_text_param, app);
        if (!routed.instance) {
            ++report.exchanges_unroutable;
            continue;
        }
        for (const auto& [param, value] : routed.instance->actuals)
            groups[{app->app_id, routed.instance->action, param}].push_back(value);
    }

    if (corpus.empty())
        report.warnings.push_back("corpus is empty; model unchanged");

    for (auto& [key, samples] : groups) {
        const auto& [app_id, action, param] = key;
        LearnReport::Group g;
        g.app_id = app_id;
        g.action = action;
        g.param = param;
        g.samples = samples.size();

        AppModel* app = nullptr;
        for (auto& a : outcome.model.apps)
            if (a.app_id == app_id) app = &a;
        if (!app) continue;

        if (samples.size() < config.min_samples) {
            g.chosen = "skipped";
            g.note = "below min_samples (" + std::to_string(config.min_samples) + ")";
            report.warnings.push_back("group " + app_id + "/" + action + "/" + param +
                                      ": only " + std::to_string(samples.size()) +
                                      " samples; left unmodeled (free text)");
            report.groups.push_back(std::move(g));
            continue;
        }

        ParamModel fitted = fit(samples, registry, config);
        g.chosen = case_name(fitted);
        std::string model_id = action + "/" + param;
        app->param_models[model_id] = std::move(fitted);
        if (ActionSpec* spec = app->catalog.find_mutable(action)) {
            auto pit = spec->params.find(param);
            if (pit != spec->params.end()) pit->second.model_ref = model_id;
        }
        report.groups.push_back(std::move(g));
    }
    return outcome;
}

} // namespace waf
