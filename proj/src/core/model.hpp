// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// The per-application model bundle and its JSON file form. Everything the
// engine evaluates against lives here; cross-references (routing <-> catalog
// <-> param models <-> fsa alphabet) are checked at load with precise
// positions so a bad model never reaches traffic.

#ifndef WAFMODEL_CORE_MODEL_HPP
#define WAFMODEL_CORE_MODEL_HPP

#include <set>

#include "core/decision.hpp"
#include "core/params.hpp"
#include "core/routing.hpp"
#include "core/session.hpp"
#include "core/usecase.hpp"

namespace waf {

struct AppModel {
    std::string app_id;
    std::vector<std::pair<std::string, int>> selectors; // (host lowercase, port)
    DecodeDecisionTree decode_tree;                     // root null = bootstrap only
    ActionCatalog catalog;
    RoutingTable routing;
    std::map<std::string, ParamModel> param_models; // id -> model
    std::vector<AttributeDef> attributes;
    UseCaseFsa fsa;
    AccessControlPolicy ac;
    std::string session_key_attribute; // names an attribute def; may be empty

    // Model for (action, param): explicit ref, else the implicit
    // "<action>/<param>" id, else null (treated as free text).
    const ParamModel* model_for(const std::string& action, const std::string& param) const;
    bool param_is_free_text(const std::string& action, const std::string& param) const;
};

struct EnginePolicy {
    // A verdict blocks when any violation's layer is in this set.
    std::set<Layer> block_layers = {Layer::syntax, Layer::routing, Layer::params,
                                    Layer::session, Layer::usecase};
};

struct ModelSet {
    std::vector<AppModel> apps;
    EnginePolicy policy;

    const AppModel* select_app(const std::string& host, int port) const;
};

struct ModelValidationError : std::runtime_error {
    std::vector<std::string> defects;
    explicit ModelValidationError(std::vector<std::string> d);
};

// Parses and fully cross-validates a model document. Throws
// ModelValidationError listing every defect found.
ModelSet load_model(const std::string& json_text,
                    const DecoderRegistry& registry = DecoderRegistry::built_in());

// Same checks, but collects defects instead of throwing.
std::vector<std::string> check_model_text(
    const std::string& json_text,
    const DecoderRegistry& registry = DecoderRegistry::built_in());

// Canonical serialization: load(save(m)) == m structurally and
// save(load(save(m))) == save(m) byte for byte.
std::string save_model(const ModelSet& modelset);

// Deep copy (decision trees hold owning pointers).
ModelSet clone_model(const ModelSet& modelset);

} // namespace waf

#endif
