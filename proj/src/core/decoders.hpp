// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Decoding steps that grow the parse tree: a decoder takes one leaf's bytes
// and produces child nodes. The registry is keyed by name so models can refer
// to decoders textually and deployments can plug in extra ones (multipart,
// RPC framings) without touching the core.

#ifndef WAFMODEL_CORE_DECODERS_HPP
#define WAFMODEL_CORE_DECODERS_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "core/tree.hpp"

namespace waf {

struct DecodeOut {
    bool ok = false;
    std::vector<ParseNode> children;
    std::string error;

    static DecodeOut success(std::vector<ParseNode> nodes)
    {
        return {true, std::move(nodes), {}};
    }
    static DecodeOut failure(std::string reason)
    {
        return {false, {}, std::move(reason)};
    }
};

using DecoderFn = std::function<DecodeOut(const Bytes&)>;

class DecoderRegistry {
public:
    // url_split, path_segments, query_string, percent, form_urlencoded,
    // json, cookie, base64
    static DecoderRegistry built_in();

    void add(std::string name, DecoderFn fn) { decoders_[std::move(name)] = std::move(fn); }
    bool has(const std::string& name) const { return decoders_.count(name) > 0; }
    const DecoderFn* find(const std::string& name) const;
    std::vector<std::string> names() const;

private:
    std::map<std::string, DecoderFn> decoders_;
};

struct DecodeFailure {
    std::string target;
    std::string decoder;
    std::string reason;
};

enum class DecodeStatus {
    applied, // children attached, decoder_applied recorded
    skipped, // target absent or already expanded: nothing to decode
    failed,  // the bytes did not decode; subtree left as a leaf
};

// Applies one decoding step in place. A failed decode is a syntax signal the
// caller records; the tree is never left half-expanded.
//
// url_split may also target the bootstrap `url` node directly (interior with
// a single `raw` leaf); it then reads `raw` and attaches `path`/`query`
// beside it, keeping both the short url.path / url.query addressing and the
// bootstrap url.raw leaf intact.
DecodeStatus apply_decoder(ParseTree& tree, const std::string& decoder,
                           const NodeAddress& target, const DecoderRegistry& registry,
                           DecodeFailure* failure);

} // namespace waf

#endif
