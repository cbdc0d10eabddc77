// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Strict HTTP/1.x request parsing. The parser deliberately rejects every
// construct with more than one defensible interpretation: obsolete line
// folding, duplicate Content-Length, Content-Length together with
// Transfer-Encoding, bare CR, bare LF line endings, non-token header names.
// A rejection is a security signal for the caller, not a crash.

#ifndef WAFMODEL_CORE_HTTP_HPP
#define WAFMODEL_CORE_HTTP_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/bytes.hpp"

namespace waf {

struct MalformedRequest : std::runtime_error {
    explicit MalformedRequest(const std::string& reason)
        : std::runtime_error(reason) {}
};

enum class HttpVersion { v1_0, v1_1 };

// Ordered name/value pairs, original casing preserved, case-insensitive lookup.
class HeaderMap {
public:
    void add(std::string name, std::string value)
    {
        entries_.emplace_back(std::move(name), std::move(value));
    }
    const std::vector<std::pair<std::string, std::string>>& entries() const
    {
        return entries_;
    }
    // First value for the name, if any.
    std::optional<std::string_view> get(std::string_view name) const;
    std::vector<std::string_view> get_all(std::string_view name) const;
    size_t count(std::string_view name) const;
    bool operator==(const HeaderMap&) const = default;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

struct HttpEnvelope {
    std::string method;
    Bytes target;        // request-target, undecoded
    HttpVersion version = HttpVersion::v1_1;
    HeaderMap headers;
    Bytes body;          // logical body (chunked input is decoded at parse)

    bool operator==(const HttpEnvelope&) const = default;
};

struct ResponseRecord {
    int status = 0;
    HeaderMap headers;
    Bytes body;

    bool operator==(const ResponseRecord&) const = default;
};

// Parses one complete request. Throws MalformedRequest on anything ambiguous.
// A chunked body is decoded; the envelope then carries a synthesized
// Content-Length so re-serialization stays self-consistent.
HttpEnvelope parse_envelope(std::string_view bytes);

// Canonical wire form: request line, "Name: value" per header, CRLF CRLF, body.
// parse_envelope(serialize_envelope(e)) == e for every envelope produced by
// parse_envelope.
Bytes serialize_envelope(const HttpEnvelope& env);

// Response parsing used by the gateway when talking to upstreams. Framing by
// Content-Length, chunked encoding, or connection close. Returns nullopt when
// more bytes are needed; consumed is set on success.
std::optional<ResponseRecord> parse_response(std::string_view bytes, bool stream_done,
                                             size_t* consumed);

// Host header split into (host, port), port defaulting to 80.
// Returns nullopt when the envelope carries no usable Host.
std::optional<std::pair<std::string, int>> host_port(const HttpEnvelope& env);

} // namespace waf

#endif
