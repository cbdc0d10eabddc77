// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WAFMODEL_CORE_VIOLATION_HPP
#define WAFMODEL_CORE_VIOLATION_HPP

#include <string>
#include <string_view>

namespace waf {

// Evaluation layers, in pipeline order.
enum class Layer { syntax, routing, params, session, usecase };

inline std::string_view layer_name(Layer layer)
{
    switch (layer) {
    case Layer::syntax: return "syntax";
    case Layer::routing: return "routing";
    case Layer::params: return "params";
    case Layer::session: return "session";
    case Layer::usecase: return "usecase";
    }
    return "unknown";
}

struct Violation {
    Layer layer;
    std::string code;   // stable machine-readable tag
    std::string detail; // operator-facing description

    bool operator==(const Violation&) const = default;
};

} // namespace waf

#endif
