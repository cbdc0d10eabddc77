// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/decoders.hpp"

#include <json.hpp>

namespace waf {

const DecoderFn* DecoderRegistry::find(const std::string& name) const
{
    auto it = decoders_.find(name);
    return it == decoders_.end() ? nullptr : &it->second;
}

std::vector<std::string> DecoderRegistry::names() const
{
    std::vector<std::string> out;
    for (const auto& [n, fn] : decoders_) out.push_back(n);
    return out;
}

namespace {

DecodeOut decode_url_split(const Bytes& value)
{
    std::vector<ParseNode> children;
    size_t q = value.find('?');
    if (q == std::string::npos) {
        children.push_back(make_leaf("path", value));
    } else {
        children.push_back(make_leaf("path", value.substr(0, q)));
        children.push_back(make_leaf("query", value.substr(q + 1)));
    }
    return DecodeOut::success(std::move(children));
}

DecodeOut decode_path_segments(const Bytes& value)
{
    std::vector<ParseNode> segments;
    size_t pos = 0;
    if (!value.empty() && value[0] == '/') pos = 1;
    std::vector<Bytes> parts;
    while (pos <= value.size()) {
        size_t slash = value.find('/', pos);
        if (slash == std::string::npos) {
            parts.push_back(value.substr(pos));
            break;
        }
        parts.push_back(value.substr(pos, slash - pos));
        pos = slash + 1;
    }
    if (!parts.empty() && parts.back().empty())
        parts.pop_back(); // trailing slash
    for (size_t i = 0; i < parts.size(); ++i)
        segments.push_back(make_leaf(std::to_string(i + 1), std::move(parts[i])));
    return DecodeOut::success(std::move(segments));
}

// Shared by query_string and form_urlencoded: '&'-separated pairs,
// percent-decoded names and values, '+' as space, repeats grouped.
DecodeOut decode_kv_pairs(const Bytes& value)
{
    std::vector<std::pair<std::string, ParseNode>> pairs;
    size_t pos = 0;
    while (pos <= value.size()) {
        size_t amp = value.find('&', pos);
        std::string_view item = amp == std::string::npos
                                    ? std::string_view(value).substr(pos)
                                    : std::string_view(value).substr(pos, amp - pos);
        if (!item.empty()) {
            size_t eq = item.find('=');
            std::string_view rawk = eq == std::string_view::npos ? item : item.substr(0, eq);
            std::string_view rawv = eq == std::string_view::npos ? std::string_view{}
                                                                 : item.substr(eq + 1);
            auto k = percent_decode(rawk, /*plus_as_space=*/true);
            auto v = percent_decode(rawv, /*plus_as_space=*/true);
            if (!k || !v)
                return DecodeOut::failure("invalid percent escape");
            if (!k->empty())
                pairs.emplace_back(std::move(*k), make_leaf("", std::move(*v)));
        }
        if (amp == std::string::npos) break;
        pos = amp + 1;
    }
    return DecodeOut::success(group_children(std::move(pairs)));
}

DecodeOut decode_percent(const Bytes& value)
{
    auto decoded = percent_decode(value, /*plus_as_space=*/false);
    if (!decoded) return DecodeOut::failure("invalid percent escape");
    std::vector<ParseNode> children;
    children.push_back(make_leaf("decoded", std::move(*decoded)));
    return DecodeOut::success(std::move(children));
}

DecodeOut decode_base64(const Bytes& value)
{
    auto decoded = base64_decode(value);
    if (!decoded) return DecodeOut::failure("invalid base64");
    std::vector<ParseNode> children;
    children.push_back(make_leaf("decoded", std::move(*decoded)));
    return DecodeOut::success(std::move(children));
}

DecodeOut decode_cookie(const Bytes& value)
{
    std::vector<std::pair<std::string, ParseNode>> pairs;
    for (auto& [name, val] : parse_cookie_header(value))
        pairs.emplace_back(std::move(name), make_leaf("", std::move(val)));
    return DecodeOut::success(group_children(std::move(pairs)));
}

ParseNode node_from_json(const nlohmann::ordered_json& j)
{
    using nlohmann::ordered_json;
    ParseNode node;
    if (j.is_object()) {
        node.kind = NodeKind::interior;
        std::vector<std::pair<std::string, ParseNode>> pairs;
        for (auto it = j.begin(); it != j.end(); ++it)
            pairs.emplace_back(it.key(), node_from_json(it.value()));
        node.children = group_children(std::move(pairs));
    } else if (j.is_array()) {
        node.kind = NodeKind::interior;
        size_t i = 0;
        for (const auto& item : j) {
            ParseNode child = node_from_json(item);
            child.label = std::to_string(++i);
            node.children.push_back(std::move(child));
        }
    } else if (j.is_string()) {
        node.kind = NodeKind::leaf;
        node.value = j.get<std::string>();
    } else {
        node.kind = NodeKind::leaf;
        node.value = j.dump(); // numbers, booleans, null keep their JSON spelling
    }
    return node;
}

DecodeOut decode_json(const Bytes& value)
{
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(value);
    } catch (const nlohmann::json::exception& e) {
        return DecodeOut::failure(std::string("invalid JSON: ") + e.what());
    }
    ParseNode root = node_from_json(j);
    if (root.is_leaf()) {
        root.label = "value";
        std::vector<ParseNode> children;
        children.push_back(std::move(root));
        return DecodeOut::success(std::move(children));
    }
    return DecodeOut::success(std::move(root.children));
}

} // namespace

DecoderRegistry DecoderRegistry::built_in()
{
    DecoderRegistry r;
    r.add("url_split", decode_url_split);
    r.add("path_segments", decode_path_segments);
    r.add("query_string", decode_kv_pairs);
    r.add("form_urlencoded", decode_kv_pairs);
    r.add("percent", decode_percent);
    r.add("base64", decode_base64);
    r.add("cookie", decode_cookie);
    r.add("json", decode_json);
    return r;
}

DecodeStatus apply_decoder(ParseTree& tree, const std::string& decoder,
                           const NodeAddress& target, const DecoderRegistry& registry,
                           DecodeFailure* failure)
{
    const DecoderFn* fn = registry.find(decoder);
    if (!fn) {
        if (failure) *failure = {target.to_string(), decoder, "decoder not registered"};
        return DecodeStatus::failed;
    }

    ParseNode* node = resolve_mutable(tree, target);
    if (!node) return DecodeStatus::skipped;

    const Bytes* input = nullptr;
    if (node->is_leaf()) {
        input = &node->value;
    } else if (decoder == "url_split") {
        // the bootstrap url node: interior holding the raw target
        ParseNode* raw = node->child("raw");
        if (raw && raw->is_leaf() && node->decoder_applied.empty())
            input = &raw->value;
        else
            return DecodeStatus::skipped;
    } else {
        return DecodeStatus::skipped;
    }

    DecodeOut out = (*fn)(*input);
    if (!out.ok) {
        if (failure) *failure = {target.to_string(), decoder, out.error};
        return DecodeStatus::failed;
    }
    node->kind = NodeKind::interior;
    node->decoder_applied = decoder;
    for (auto& child : out.children)
        node->children.push_back(std::move(child));
    return DecodeStatus::applied;
}

} // namespace waf
