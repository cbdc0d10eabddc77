// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/tree.hpp"

#include <algorithm>

namespace waf {

const ParseNode* ParseNode::child(std::string_view name) const
{
    for (const auto& c : children)
        if (c.label == name) return &c;
    return nullptr;
}

ParseNode* ParseNode::child(std::string_view name)
{
    for (auto& c : children)
        if (c.label == name) return &c;
    return nullptr;
}

std::optional<NodeAddress> NodeAddress::parse(std::string_view text)
{
    if (text.empty()) return std::nullopt;
    std::vector<std::string> segments;
    size_t pos = 0;
    while (true) {
        size_t dot = text.find('.', pos);
        std::string_view seg = dot == std::string_view::npos
                                   ? text.substr(pos)
                                   : text.substr(pos, dot - pos);
        if (seg.empty()) return std::nullopt;
        segments.emplace_back(seg);
        if (dot == std::string_view::npos) break;
        pos = dot + 1;
    }
    return NodeAddress(std::move(segments));
}

std::string NodeAddress::to_string() const
{
    std::string out;
    for (size_t i = 0; i < segments_.size(); ++i) {
        if (i) out.push_back('.');
        out += segments_[i];
    }
    return out;
}

const ParseNode* resolve(const ParseTree& tree, const NodeAddress& addr)
{
    const ParseNode* node = &tree.root;
    for (const auto& seg : addr.segments()) {
        node = node->child(seg);
        if (!node) return nullptr;
    }
    return node;
}

ParseNode* resolve_mutable(ParseTree& tree, const NodeAddress& addr)
{
    ParseNode* node = &tree.root;
    for (const auto& seg : addr.segments()) {
        node = node->child(seg);
        if (!node) return nullptr;
    }
    return node;
}

ParseNode make_leaf(std::string label, Bytes value)
{
    ParseNode n;
    n.label = std::move(label);
    n.kind = NodeKind::leaf;
    n.value = std::move(value);
    return n;
}

std::vector<ParseNode> group_children(std::vector<std::pair<std::string, ParseNode>> pairs)
{
    std::vector<ParseNode> out;
    std::vector<std::string> order;
    for (auto& [label, node] : pairs) {
        if (std::find(order.begin(), order.end(), label) == order.end())
            order.push_back(label);
    }
    for (const auto& label : order) {
        size_t count = 0;
        for (const auto& [l, n] : pairs)
            if (l == label) ++count;
        if (count == 1) {
            for (auto& [l, n] : pairs) {
                if (l == label) {
                    ParseNode child = std::move(n);
                    child.label = label;
                    out.push_back(std::move(child));
                    break;
                }
            }
        } else {
            ParseNode parent;
            parent.label = label;
            parent.kind = NodeKind::interior;
            size_t ordinal = 0;
            for (auto& [l, n] : pairs) {
                if (l == label) {
                    ParseNode child = std::move(n);
                    child.label = std::to_string(++ordinal);
                    parent.children.push_back(std::move(child));
                }
            }
            out.push_back(std::move(parent));
        }
    }
    return out;
}

std::vector<std::pair<std::string, Bytes>> parse_cookie_header(std::string_view value)
{
    std::vector<std::pair<std::string, Bytes>> pairs;
    size_t pos = 0;
    while (pos <= value.size()) {
        size_t semi = value.find(';', pos);
        std::string_view item = semi == std::string_view::npos
                                    ? value.substr(pos)
                                    : value.substr(pos, semi - pos);
        while (!item.empty() && (item.front() == ' ' || item.front() == '\t'))
            item.remove_prefix(1);
        while (!item.empty() && (item.back() == ' ' || item.back() == '\t'))
            item.remove_suffix(1);
        if (!item.empty()) {
            size_t eq = item.find('=');
            std::string name(eq == std::string_view::npos ? item : item.substr(0, eq));
            Bytes val(eq == std::string_view::npos ? std::string_view{} : item.substr(eq + 1));
            if (!name.empty())
                pairs.emplace_back(std::move(name), std::move(val));
        }
        if (semi == std::string_view::npos) break;
        pos = semi + 1;
    }
    return pairs;
}

ParseTree bootstrap_tree(const HttpEnvelope& env)
{
    ParseTree tree;
    tree.root.label = "request";
    tree.root.kind = NodeKind::interior;

    ParseNode request;
    request.label = "request";
    request.kind = NodeKind::interior;
    request.children.push_back(make_leaf("method", env.method));
    request.children.push_back(
        make_leaf("version", env.version == HttpVersion::v1_1 ? "1.1" : "1.0"));
    tree.root.children.push_back(std::move(request));

    ParseNode url;
    url.label = "url";
    url.kind = NodeKind::interior;
    url.children.push_back(make_leaf("raw", env.target));
    tree.root.children.push_back(std::move(url));

    if (!env.headers.entries().empty()) {
        std::vector<std::pair<std::string, ParseNode>> pairs;
        for (const auto& [n, v] : env.headers.entries())
            pairs.emplace_back(ascii_lower(n), make_leaf("", v));
        ParseNode header;
        header.label = "header";
        header.kind = NodeKind::interior;
        header.children = group_children(std::move(pairs));
        tree.root.children.push_back(std::move(header));
    }

    std::vector<std::pair<std::string, ParseNode>> cookie_pairs;
    for (auto v : env.headers.get_all("cookie")) {
        for (auto& [name, val] : parse_cookie_header(v))
            cookie_pairs.emplace_back(std::move(name), make_leaf("", std::move(val)));
    }
    if (!cookie_pairs.empty()) {
        ParseNode cookie;
        cookie.label = "cookie";
        cookie.kind = NodeKind::interior;
        cookie.children = group_children(std::move(cookie_pairs));
        tree.root.children.push_back(std::move(cookie));
    }

    tree.root.children.push_back(make_leaf("body", env.body));
    return tree;
}

namespace {

void render_node(const ParseNode& node, const std::string& prefix, int depth,
                 std::string& out)
{
    std::string addr = prefix.empty() ? node.label : prefix + "." + node.label;
    out.append(static_cast<size_t>(depth) * 2, ' ');
    out += addr;
    if (node.is_leaf()) {
        out += " = \"";
        out += printable(node.value);
        out += "\"";
    } else if (!node.decoder_applied.empty()) {
        out += " [";
        out += node.decoder_applied;
        out += "]";
    }
    out.push_back('\n');
    for (const auto& c : node.children)
        render_node(c, addr, depth + 1, out);
}

} // namespace

std::string render_tree(const ParseTree& tree)
{
    std::string out;
    for (const auto& c : tree.root.children)
        render_node(c, "", 0, out);
    return out;
}

std::string render_subtree(const ParseNode& node)
{
    std::string out;
    render_node(node, "", 0, out);
    return out;
}

} // namespace waf
