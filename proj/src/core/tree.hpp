// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Labeled parse trees over decoded request content. Every predicate in the
// model evaluates against one of these; addresses use the dotted 1-based
// scheme (url.path.2, header.cookie, body.csrftoken).

#ifndef WAFMODEL_CORE_TREE_HPP
#define WAFMODEL_CORE_TREE_HPP

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core/http.hpp"

namespace waf {

enum class NodeKind { interior, leaf };

struct ParseNode {
    std::string label;         // edge label from the parent
    NodeKind kind = NodeKind::leaf;
    Bytes value;               // leaf payload
    std::vector<ParseNode> children;
    std::string decoder_applied; // set when a decoder expanded this node

    bool is_leaf() const { return kind == NodeKind::leaf; }
    const ParseNode* child(std::string_view label) const;
    ParseNode* child(std::string_view label);
};

struct ParseTree {
    ParseNode root; // label "request"
};

class NodeAddress {
public:
    NodeAddress() = default;
    explicit NodeAddress(std::vector<std::string> segments)
        : segments_(std::move(segments)) {}

    // Parses "url.path.2". Empty input or empty segments are invalid.
    static std::optional<NodeAddress> parse(std::string_view text);
    std::string to_string() const;

    const std::vector<std::string>& segments() const { return segments_; }
    bool empty() const { return segments_.empty(); }
    bool operator==(const NodeAddress&) const = default;

private:
    std::vector<std::string> segments_;
};

// Exact segment-by-segment descent from below the root. nullptr when absent.
const ParseNode* resolve(const ParseTree& tree, const NodeAddress& addr);
ParseNode* resolve_mutable(ParseTree& tree, const NodeAddress& addr);

// Groups (label, node) pairs into children: unique labels become direct
// children, repeated labels become an interior node with 1..n children.
// This is the one convention shared by headers, query strings, cookies and
// JSON objects, so repeated keys are always addressable.
std::vector<ParseNode> group_children(std::vector<std::pair<std::string, ParseNode>> pairs);

ParseNode make_leaf(std::string label, Bytes value);

// Cookie-header pair list: "a=1; b=2" -> {(a,1),(b,2)}. Values keep their raw
// bytes; a pair without '=' yields an empty value.
std::vector<std::pair<std::string, Bytes>> parse_cookie_header(std::string_view value);

// Canonical envelope-to-tree bootstrap: request.method, request.version,
// url (leaf child raw = full target), header.<lowercase-name>, cookie.<name>,
// body.
ParseTree bootstrap_tree(const HttpEnvelope& env);

// Deterministic indented rendering, one line per node, full addresses,
// decoder annotations, long values truncated.
std::string render_tree(const ParseTree& tree);
std::string render_subtree(const ParseNode& node);

} // namespace waf

#endif
