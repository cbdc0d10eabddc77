// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/model.hpp"

#include <json.hpp>

namespace waf {

using ordered_json = nlohmann::ordered_json;

ModelValidationError::ModelValidationError(std::vector<std::string> d)
    : std::runtime_error(d.empty() ? "model invalid"
                                   : "model invalid: " + d.front() +
                                         (d.size() > 1 ? " (+" + std::to_string(d.size() - 1) +
                                                             " more)"
                                                       : "")),
      defects(std::move(d))
{
}

const ParamModel* AppModel::model_for(const std::string& action,
                                      const std::string& param) const
{
    const ActionSpec* spec = catalog.find(action);
    if (!spec) return nullptr;
    auto pit = spec->params.find(param);
    if (pit == spec->params.end()) return nullptr;
    std::string ref = pit->second.model_ref;
    if (ref.empty()) ref = action + "/" + param;
    auto mit = param_models.find(ref);
    return mit == param_models.end() ? nullptr : &mit->second;
}

bool AppModel::param_is_free_text(const std::string& action, const std::string& param) const
{
    const ParamModel* m = model_for(action, param);
    return !m || std::holds_alternative<FreeText>(*m);
}

const AppModel* ModelSet::select_app(const std::string& host, int port) const
{
    std::string lowered = ascii_lower(host);
    for (const auto& app : apps)
        for (const auto& [h, p] : app.selectors)
            if (p == port && h == lowered) return &app;
    return nullptr;
}

namespace {

// ---- byte-string <-> JSON (values that are not UTF-8 ride as {"b64": ...}) ----

ordered_json json_from_bytes(const Bytes& value)
{
    if (utf8_valid(value)) return value;
    ordered_json obj;
    obj["b64"] = base64_encode(value);
    return obj;
}

std::optional<Bytes> bytes_from_json(const ordered_json& j)
{
    if (j.is_string()) return j.get<std::string>();
    if (j.is_object() && j.contains("b64") && j["b64"].is_string())
        return base64_decode(j["b64"].get<std::string>());
    return std::nullopt;
}

// ---- load ----

struct Loader {
    const DecoderRegistry& registry;
    std::vector<std::string> defects;

    void defect(const std::string& where, const std::string& what)
    {
        defects.push_back(where + ": " + what);
    }

    std::string str_field(const ordered_json& obj, const char* key,
                          const std::string& where, bool required = true)
    {
        auto it = obj.find(key);
        if (it == obj.end() || !it->is_string()) {
            if (required) defect(where, std::string("missing string field '") + key + "'");
            return {};
        }
        return it->get<std::string>();
    }

    NodeAddress address_field(const std::string& text, const std::string& where)
    {
        auto addr = NodeAddress::parse(text);
        if (!addr) {
            defect(where, "bad address '" + text + "'");
            return NodeAddress(std::vector<std::string>{"invalid"});
        }
        return *addr;
    }

    Predicate predicate_field(const std::string& text, const std::string& where)
    {
        try {
            return Predicate::parse(text);
        } catch (const PredicateParseError& e) {
            defect(where, e.what());
            return Predicate();
        }
    }

    std::unique_ptr<DecisionNode> decision_node(const ordered_json& j,
                                                const std::string& where)
    {
        if (!j.is_object()) {
            defect(where, "decision node must be an object");
            return nullptr;
        }
        auto node = std::make_unique<DecisionNode>();
        auto sit = j.find("step");
        if (sit != j.end() && !sit->is_null()) {
            node->has_step = true;
            node->decoder = str_field(*sit, "decoder", where + ".step");
            if (!node->decoder.empty() && !registry.has(node->decoder))
                defect(where + ".step", "decoder '" + node->decoder + "' not registered");
            node->target =
                address_field(str_field(*sit, "target", where + ".step"), where + ".step");
        }
        auto bit = j.find("branches");
        if (bit != j.end()) {
            if (!bit->is_array()) {
                defect(where, "'branches' must be an array");
            } else {
                size_t k = 0;
                for (const auto& b : *bit) {
                    std::string bwhere = where + ".branches[" + std::to_string(k++) + "]";
                    DecisionNode::Branch branch;
                    if (b.contains("when") && b["when"].is_string())
                        branch.when = predicate_field(b["when"].get<std::string>(), bwhere);
                    auto tit = b.find("then");
                    if (tit == b.end()) {
                        defect(bwhere, "missing 'then'");
                        continue;
                    }
                    branch.then = decision_node(*tit, bwhere + ".then");
                    if (branch.then) node->branches.push_back(std::move(branch));
                }
            }
        }
        return node;
    }

    ParamModel param_model(const ordered_json& j, const std::string& where)
    {
        std::string kind = str_field(j, "case", where);
        if (kind == "enum") {
            Enumeration e;
            auto vit = j.find("values");
            if (vit == j.end() || !vit->is_array() || vit->empty()) {
                defect(where, "enum model needs a non-empty 'values' array");
                return e;
            }
            for (const auto& v : *vit) {
                auto value = bytes_from_json(v);
                if (!value) defect(where, "bad enum value entry");
                else e.values.insert(*value);
            }
            return e;
        }
        if (kind == "known") {
            KnownType k;
            k.type_name = str_field(j, "type", where);
            std::string pattern = str_field(j, "pattern", where, /*required=*/false);
            if (pattern.empty()) {
                const TypeEntry* entry = TypeRegistry::built_in().find(k.type_name);
                if (!entry) {
                    defect(where, "unknown type '" + k.type_name + "' and no pattern given");
                    return k;
                }
                pattern = entry->pattern.source();
            }
            try {
                k.pattern = Regex::compile(pattern);
            } catch (const PredicateParseError& e) {
                defect(where, e.what());
            }
            return k;
        }
        if (kind == "stat") {
            StatClassifier s;
            auto num_vec = [&](const char* key, std::vector<double>& out) {
                auto it = j.find(key);
                if (it == j.end() || !it->is_array()) {
                    defect(where, std::string("missing numeric array '") + key + "'");
                    return;
                }
                for (const auto& v : *it) {
                    if (!v.is_number()) {
                        defect(where, std::string("non-numeric entry in '") + key + "'");
                        return;
                    }
                    out.push_back(v.get<double>());
                }
            };
            num_vec("mean", s.mean);
            num_vec("covariance", s.covariance);
            s.threshold = j.value("threshold", 0.0);
            s.d = j.value("d", kFeatureCount);
            s.feature_version = j.value("features", std::string(kFeatureVersion));
            if (s.feature_version != kFeatureVersion)
                defect(where, "feature version '" + s.feature_version +
                                  "' not supported (want " + kFeatureVersion + ")");
            else if (!s.finalize())
                defect(where, "covariance is not symmetric positive-definite "
                              "or dimensions disagree");
            return s;
        }
        if (kind == "free") return FreeText{};
        defect(where, "unknown model case '" + kind + "'");
        return FreeText{};
    }

    ResponseLocator response_locator(const ordered_json& j, const std::string& where)
    {
        ResponseLocator loc;
        std::string kind = str_field(j, "kind", where);
        if (kind == "header") {
            loc.kind = ResponseLocator::Kind::header;
            loc.name = str_field(j, "name", where);
        } else if (kind == "set_cookie") {
            loc.kind = ResponseLocator::Kind::set_cookie;
            loc.name = str_field(j, "name", where);
        } else if (kind == "body_regex") {
            loc.kind = ResponseLocator::Kind::body_regex;
            std::string pattern = str_field(j, "pattern", where);
            try {
                loc.pattern = Regex::compile(pattern);
                if (loc.pattern.mark_count() != 1)
                    defect(where, "body_regex needs exactly one capture group");
            } catch (const PredicateParseError& e) {
                defect(where, e.what());
            }
        } else if (kind == "body_json") {
            loc.kind = ResponseLocator::Kind::body_json;
            loc.address = address_field(str_field(j, "address", where), where);
        } else {
            defect(where, "unknown response locator kind '" + kind + "'");
        }
        return loc;
    }

    RequestLocator request_locator(const ordered_json& j, const std::string& where)
    {
        RequestLocator loc;
        std::string kind = str_field(j, "kind", where);
        if (kind == "cookie") {
            loc.kind = RequestLocator::Kind::cookie;
            loc.name = str_field(j, "name", where);
        } else if (kind == "tree") {
            loc.kind = RequestLocator::Kind::tree_address;
            loc.address = address_field(str_field(j, "address", where), where);
        } else {
            defect(where, "unknown request locator kind '" + kind + "'");
        }
        return loc;
    }

    std::set<std::string> action_set(const ordered_json& j, const std::string& where)
    {
        std::set<std::string> out;
        if (!j.is_array()) {
            defect(where, "expected an array of action names");
            return out;
        }
        for (const auto& v : j) {
            if (v.is_string()) out.insert(v.get<std::string>());
            else defect(where, "action names must be strings");
        }
        return out;
    }

    AppModel app(const ordered_json& j, const std::string& where)
    {
        AppModel app;
        app.app_id = str_field(j, "app_id", where);

        auto sit = j.find("selectors");
        if (sit == j.end() || !sit->is_array() || sit->empty()) {
            defect(where, "app needs at least one {host, port} selector");
        } else {
            for (const auto& s : *sit) {
                std::string host = ascii_lower(str_field(s, "host", where + ".selectors"));
                int port = s.value("port", 80);
                if (port < 1 || port > 65535)
                    defect(where + ".selectors", "port out of range");
                app.selectors.emplace_back(std::move(host), port);
            }
        }

        auto dit = j.find("decode_tree");
        if (dit != j.end() && !dit->is_null())
            app.decode_tree.root = decision_node(*dit, where + ".decode_tree");

        std::vector<ActionSpec> actions;
        auto ait = j.find("actions");
        if (ait != j.end() && ait->is_array()) {
            size_t k = 0;
            for (const auto& a : *ait) {
                std::string awhere = where + ".actions[" + std::to_string(k++) + "]";
                ActionSpec spec;
                spec.name = str_field(a, "name", awhere);
                spec.idempotent = a.value("idempotent", true);
                spec.is_public = a.value("public", true);
                auto pit = a.find("params");
                if (pit != a.end() && pit->is_object()) {
                    for (auto it = pit->begin(); it != pit->end(); ++it) {
                        ParamSpec p;
                        if (it.value().is_object()) {
                            p.model_ref = it.value().value("model", std::string());
                            p.required = it.value().value("required", true);
                        }
                        spec.params.emplace(it.key(), std::move(p));
                    }
                }
                for (const auto& existing : actions)
                    if (existing.name == spec.name)
                        defect(awhere, "duplicate action name '" + spec.name + "'");
                actions.push_back(std::move(spec));
            }
        }
        app.catalog = ActionCatalog(std::move(actions));

        auto rit = j.find("routing");
        if (rit != j.end() && rit->is_array()) {
            size_t k = 0;
            for (const auto& r : *rit) {
                std::string rwhere = where + ".routing[" + std::to_string(k++) + "]";
                RouteRule rule;
                rule.predicate = predicate_field(str_field(r, "when", rwhere), rwhere);
                rule.action = str_field(r, "action", rwhere);
                auto bit = r.find("bind");
                if (bit != r.end() && bit->is_object()) {
                    for (auto it = bit->begin(); it != bit->end(); ++it) {
                        if (!it.value().is_string()) {
                            defect(rwhere, "bindings must map param names to addresses");
                            continue;
                        }
                        rule.bindings.emplace(
                            it.key(),
                            address_field(it.value().get<std::string>(), rwhere));
                    }
                }
                app.routing.rules.push_back(std::move(rule));
            }
        }
        for (const auto& d : validate_table(app.routing, app.catalog))
            defect(where + ".routing", d);

        auto mit = j.find("param_models");
        if (mit != j.end() && mit->is_object()) {
            for (auto it = mit->begin(); it != mit->end(); ++it)
                app.param_models.emplace(
                    it.key(),
                    param_model(it.value(), where + ".param_models[" + it.key() + "]"));
        }
        for (const auto& action : app.catalog.actions()) {
            for (const auto& [pname, pspec] : action.params) {
                if (!pspec.model_ref.empty() && !app.param_models.count(pspec.model_ref))
                    defect(where, "param '" + action.name + "/" + pname +
                                      "' references unknown model '" + pspec.model_ref + "'");
            }
        }

        auto atit = j.find("attributes");
        if (atit != j.end() && atit->is_array()) {
            size_t k = 0;
            for (const auto& a : *atit) {
                std::string awhere = where + ".attributes[" + std::to_string(k++) + "]";
                AttributeDef def;
                def.name = str_field(a, "name", awhere);
                if (auto it = a.find("set"); it != a.end() && !it->is_null()) {
                    SetRule rule;
                    if (it->contains("locator"))
                        rule.locator = response_locator((*it)["locator"], awhere + ".set");
                    else
                        defect(awhere + ".set", "missing 'locator'");
                    auto oa = it->find("on_actions");
                    if (oa != it->end() && !(oa->is_string() && *oa == "any")) {
                        rule.any_action = false;
                        rule.on_actions = action_set(*oa, awhere + ".set.on_actions");
                        for (const auto& name : rule.on_actions)
                            if (!app.catalog.find(name))
                                defect(awhere + ".set", "unknown action '" + name + "'");
                    }
                    def.set_rule = std::move(rule);
                }
                if (auto it = a.find("verify"); it != a.end() && !it->is_null()) {
                    VerifyRule rule;
                    if (it->contains("locator"))
                        rule.locator = request_locator((*it)["locator"], awhere + ".verify");
                    else
                        defect(awhere + ".verify", "missing 'locator'");
                    auto sc = it->find("scope");
                    if (sc == it->end()) {
                        defect(awhere + ".verify", "missing 'scope'");
                    } else if (sc->is_string()) {
                        std::string scope = sc->get<std::string>();
                        if (scope == "all") rule.scope = VerifyScope::all;
                        else if (scope == "non_public") rule.scope = VerifyScope::non_public;
                        else if (scope == "non_idempotent")
                            rule.scope = VerifyScope::non_idempotent;
                        else defect(awhere + ".verify", "unknown scope '" + scope + "'");
                    } else if (sc->is_object() && sc->contains("explicit")) {
                        rule.scope = VerifyScope::explicit_list;
                        rule.explicit_actions =
                            action_set((*sc)["explicit"], awhere + ".verify.scope");
                        for (const auto& name : rule.explicit_actions)
                            if (!app.catalog.find(name))
                                defect(awhere + ".verify", "unknown action '" + name + "'");
                    } else {
                        defect(awhere + ".verify", "bad scope");
                    }
                    def.verify_rule = std::move(rule);
                }
                if (auto it = a.find("invalidate"); it != a.end() && !it->is_null()) {
                    InvalidateRule rule;
                    rule.on_actions = action_set((*it)["on_actions"], awhere + ".invalidate");
                    for (const auto& name : rule.on_actions)
                        if (!app.catalog.find(name))
                            defect(awhere + ".invalidate", "unknown action '" + name + "'");
                    std::string clears = it->value("clears", "self");
                    if (clears == "all") rule.clears_all = true;
                    else if (clears == "self") rule.clears_all = false;
                    else defect(awhere + ".invalidate", "clears must be 'self' or 'all'");
                    def.invalidate_rule = std::move(rule);
                }
                app.attributes.push_back(std::move(def));
            }
        }

        auto fit = j.find("fsa");
        if (fit != j.end() && !fit->is_null()) {
            std::string fwhere = where + ".fsa";
            app.fsa.start = str_field(*fit, "start", fwhere);
            app.fsa.states.insert(app.fsa.start);
            auto tit = fit->find("transitions");
            if (tit != fit->end() && tit->is_array()) {
                for (const auto& t : *tit) {
                    std::string from = str_field(t, "from", fwhere);
                    std::string on = str_field(t, "on", fwhere);
                    std::string to = str_field(t, "to", fwhere);
                    app.fsa.states.insert(from);
                    app.fsa.states.insert(to);
                    app.fsa.alphabet.insert(on);
                    if (!app.fsa.transitions.emplace(std::make_pair(from, on), to).second)
                        defect(fwhere, "duplicate transition (" + from + ", " + on + ")");
                    if (!app.catalog.find(on))
                        defect(fwhere, "transition on unknown action '" + on + "'");
                }
            }
        }

        auto acit = j.find("access_control");
        if (acit != j.end() && !acit->is_null()) {
            std::string acwhere = where + ".access_control";
            std::string mode = str_field(*acit, "mode", acwhere);
            if (mode == "off") app.ac.mode = AccessControlMode::off;
            else if (mode == "action_level") app.ac.mode = AccessControlMode::action_level;
            else if (mode == "instance_level")
                app.ac.mode = AccessControlMode::instance_level;
            else defect(acwhere, "unknown mode '" + mode + "'");
            if (auto seed = acit->find("seed"); seed != acit->end()) {
                app.ac.seed_actions = action_set(*seed, acwhere + ".seed");
                for (const auto& name : app.ac.seed_actions)
                    if (!app.catalog.find(name))
                        defect(acwhere, "seed names unknown action '" + name + "'");
            }
            app.ac.parse_links = acit->value("parse_links", true);
            app.ac.parse_forms = acit->value("parse_forms", true);
        }

        app.session_key_attribute = j.value("session_key_attribute", std::string());
        if (!app.session_key_attribute.empty()) {
            bool found = false;
            for (const auto& def : app.attributes)
                if (def.name == app.session_key_attribute) found = true;
            if (!found)
                defect(where, "session_key_attribute names unknown attribute '" +
                                  app.session_key_attribute + "'");
        }
        return app;
    }

    ModelSet model_set(const ordered_json& j)
    {
        ModelSet ms;
        auto apps = j.find("apps");
        if (apps == j.end() || !apps->is_array()) {
            defect("document", "missing 'apps' array");
            return ms;
        }
        size_t k = 0;
        for (const auto& a : *apps)
            ms.apps.push_back(app(a, "apps[" + std::to_string(k++) + "]"));

        std::set<std::string> ids;
        std::set<std::pair<std::string, int>> claimed;
        for (const auto& application : ms.apps) {
            if (!ids.insert(application.app_id).second)
                defect("document", "duplicate app_id '" + application.app_id + "'");
            for (const auto& sel : application.selectors)
                if (!claimed.insert(sel).second)
                    defect("document", "selector " + sel.first + ":" +
                                           std::to_string(sel.second) +
                                           " claimed by two apps");
        }

        if (auto pit = j.find("policy"); pit != j.end() && pit->is_object()) {
            auto bl = pit->find("block_layers");
            if (bl != pit->end() && bl->is_array()) {
                ms.policy.block_layers.clear();
                for (const auto& l : *bl) {
                    std::string name = l.is_string() ? l.get<std::string>() : "";
                    if (name == "syntax") ms.policy.block_layers.insert(Layer::syntax);
                    else if (name == "routing") ms.policy.block_layers.insert(Layer::routing);
                    else if (name == "params") ms.policy.block_layers.insert(Layer::params);
                    else if (name == "session") ms.policy.block_layers.insert(Layer::session);
                    else if (name == "usecase") ms.policy.block_layers.insert(Layer::usecase);
                    else defect("policy.block_layers", "unknown layer '" + name + "'");
                }
            }
        }
        return ms;
    }
};

} // namespace

ModelSet load_model(const std::string& json_text, const DecoderRegistry& registry)
{
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ModelValidationError({std::string("document: invalid JSON: ") + e.what()});
    }
    Loader loader{registry, {}};
    ModelSet ms = loader.model_set(j);
    if (!loader.defects.empty())
        throw ModelValidationError(std::move(loader.defects));
    return ms;
}

std::vector<std::string> check_model_text(const std::string& json_text,
                                          const DecoderRegistry& registry)
{
    ordered_json j;
    try {
        j = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        return {std::string("document: invalid JSON: ") + e.what()};
    }
    Loader loader{registry, {}};
    loader.model_set(j);
    return loader.defects;
}

namespace {

// ---- save ----

ordered_json save_decision_node(const DecisionNode& node)
{
    ordered_json j;
    if (node.has_step) {
        ordered_json step;
        step["decoder"] = node.decoder;
        step["target"] = node.target.to_string();
        j["step"] = std::move(step);
    } else {
        j["step"] = nullptr;
    }
    ordered_json branches = ordered_json::array();
    for (const auto& b : node.branches) {
        ordered_json branch;
        branch["when"] = b.when.text();
        branch["then"] = save_decision_node(*b.then);
        branches.push_back(std::move(branch));
    }
    j["branches"] = std::move(branches);
    return j;
}

ordered_json save_param_model(const ParamModel& model)
{
    ordered_json j;
    if (const auto* e = std::get_if<Enumeration>(&model)) {
        j["case"] = "enum";
        ordered_json values = ordered_json::array();
        for (const auto& v : e->values) values.push_back(json_from_bytes(v));
        j["values"] = std::move(values);
    } else if (const auto* k = std::get_if<KnownType>(&model)) {
        j["case"] = "known";
        j["type"] = k->type_name;
        j["pattern"] = k->pattern.source();
    } else if (const auto* s = std::get_if<StatClassifier>(&model)) {
        j["case"] = "stat";
        j["mean"] = s->mean;
        j["covariance"] = s->covariance;
        j["threshold"] = s->threshold;
        j["d"] = s->d;
        j["features"] = s->feature_version;
    } else {
        j["case"] = "free";
    }
    return j;
}

ordered_json save_response_locator(const ResponseLocator& loc)
{
    ordered_json j;
    switch (loc.kind) {
    case ResponseLocator::Kind::header:
        j["kind"] = "header";
        j["name"] = loc.name;
        break;
    case ResponseLocator::Kind::set_cookie:
        j["kind"] = "set_cookie";
        j["name"] = loc.name;
        break;
    case ResponseLocator::Kind::body_regex:
        j["kind"] = "body_regex";
        j["pattern"] = loc.pattern.source();
        break;
    case ResponseLocator::Kind::body_json:
        j["kind"] = "body_json";
        j["address"] = loc.address.to_string();
        break;
    }
    return j;
}

ordered_json save_request_locator(const RequestLocator& loc)
{
    ordered_json j;
    if (loc.kind == RequestLocator::Kind::cookie) {
        j["kind"] = "cookie";
        j["name"] = loc.name;
    } else {
        j["kind"] = "tree";
        j["address"] = loc.address.to_string();
    }
    return j;
}

ordered_json save_app(const AppModel& app)
{
    ordered_json j;
    j["app_id"] = app.app_id;
    ordered_json selectors = ordered_json::array();
    for (const auto& [host, port] : app.selectors) {
        ordered_json s;
        s["host"] = host;
        s["port"] = port;
        selectors.push_back(std::move(s));
    }
    j["selectors"] = std::move(selectors);
    j["decode_tree"] =
        app.decode_tree.root ? save_decision_node(*app.decode_tree.root) : ordered_json();

    ordered_json actions = ordered_json::array();
    for (const auto& spec : app.catalog.actions()) {
        ordered_json a;
        a["name"] = spec.name;
        a["idempotent"] = spec.idempotent;
        a["public"] = spec.is_public;
        ordered_json params = ordered_json::object();
        for (const auto& [pname, pspec] : spec.params) {
            ordered_json p;
            if (!pspec.model_ref.empty()) p["model"] = pspec.model_ref;
            p["required"] = pspec.required;
            params[pname] = std::move(p);
        }
        a["params"] = std::move(params);
        actions.push_back(std::move(a));
    }
    j["actions"] = std::move(actions);

    ordered_json routing = ordered_json::array();
    for (const auto& rule : app.routing.rules) {
        ordered_json r;
        r["when"] = rule.predicate.text();
        r["action"] = rule.action;
        ordered_json bind = ordered_json::object();
        for (const auto& [param, addr] : rule.bindings) bind[param] = addr.to_string();
        r["bind"] = std::move(bind);
        routing.push_back(std::move(r));
    }
    j["routing"] = std::move(routing);

    ordered_json models = ordered_json::object();
    for (const auto& [id, model] : app.param_models) models[id] = save_param_model(model);
    j["param_models"] = std::move(models);

    ordered_json attrs = ordered_json::array();
    for (const auto& def : app.attributes) {
        ordered_json a;
        a["name"] = def.name;
        if (def.set_rule) {
            ordered_json s;
            s["locator"] = save_response_locator(def.set_rule->locator);
            if (def.set_rule->any_action) {
                s["on_actions"] = "any";
            } else {
                ordered_json names = ordered_json::array();
                for (const auto& n : def.set_rule->on_actions) names.push_back(n);
                s["on_actions"] = std::move(names);
            }
            a["set"] = std::move(s);
        }
        if (def.verify_rule) {
            ordered_json v;
            v["locator"] = save_request_locator(def.verify_rule->locator);
            switch (def.verify_rule->scope) {
            case VerifyScope::all: v["scope"] = "all"; break;
            case VerifyScope::non_public: v["scope"] = "non_public"; break;
            case VerifyScope::non_idempotent: v["scope"] = "non_idempotent"; break;
            case VerifyScope::explicit_list: {
                ordered_json names = ordered_json::array();
                for (const auto& n : def.verify_rule->explicit_actions) names.push_back(n);
                ordered_json scope;
                scope["explicit"] = std::move(names);
                v["scope"] = std::move(scope);
                break;
            }
            }
            a["verify"] = std::move(v);
        }
        if (def.invalidate_rule) {
            ordered_json inv;
            ordered_json names = ordered_json::array();
            for (const auto& n : def.invalidate_rule->on_actions) names.push_back(n);
            inv["on_actions"] = std::move(names);
            inv["clears"] = def.invalidate_rule->clears_all ? "all" : "self";
            a["invalidate"] = std::move(inv);
        }
        attrs.push_back(std::move(a));
    }
    j["attributes"] = std::move(attrs);

    if (!app.fsa.empty()) {
        ordered_json fsa;
        fsa["start"] = app.fsa.start;
        ordered_json transitions = ordered_json::array();
        for (const auto& [key, to] : app.fsa.transitions) {
            ordered_json t;
            t["from"] = key.first;
            t["on"] = key.second;
            t["to"] = to;
            transitions.push_back(std::move(t));
        }
        fsa["transitions"] = std::move(transitions);
        j["fsa"] = std::move(fsa);
    } else {
        j["fsa"] = nullptr;
    }

    ordered_json ac;
    switch (app.ac.mode) {
    case AccessControlMode::off: ac["mode"] = "off"; break;
    case AccessControlMode::action_level: ac["mode"] = "action_level"; break;
    case AccessControlMode::instance_level: ac["mode"] = "instance_level"; break;
    }
    ordered_json seed = ordered_json::array();
    for (const auto& n : app.ac.seed_actions) seed.push_back(n);
    ac["seed"] = std::move(seed);
    ac["parse_links"] = app.ac.parse_links;
    ac["parse_forms"] = app.ac.parse_forms;
    j["access_control"] = std::move(ac);

    if (!app.session_key_attribute.empty())
        j["session_key_attribute"] = app.session_key_attribute;
    return j;
}

} // namespace

std::string save_model(const ModelSet& modelset)
{
    ordered_json j;
    ordered_json apps = ordered_json::array();
    for (const auto& app : modelset.apps) apps.push_back(save_app(app));
    j["apps"] = std::move(apps);

    ordered_json policy;
    ordered_json layers = ordered_json::array();
    for (Layer l : modelset.policy.block_layers) layers.push_back(std::string(layer_name(l)));
    policy["block_layers"] = std::move(layers);
    j["policy"] = std::move(policy);
    return j.dump(2) + "\n";
}

ModelSet clone_model(const ModelSet& modelset)
{
    return load_model(save_model(modelset));
}

} // namespace waf
