// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/http.hpp"

#include <charconv>

namespace waf {

std::optional<std::string_view> HeaderMap::get(std::string_view name) const
{
    for (const auto& [n, v] : entries_)
        if (ascii_iequals(n, name)) return std::string_view(v);
    return std::nullopt;
}

std::vector<std::string_view> HeaderMap::get_all(std::string_view name) const
{
    std::vector<std::string_view> out;
    for (const auto& [n, v] : entries_)
        if (ascii_iequals(n, name)) out.emplace_back(v);
    return out;
}

size_t HeaderMap::count(std::string_view name) const
{
    size_t c = 0;
    for (const auto& [n, v] : entries_)
        if (ascii_iequals(n, name)) ++c;
    return c;
}

namespace {

constexpr std::string_view kCrlf = "\r\n";

bool valid_field_value(std::string_view v)
{
    for (unsigned char c : v) {
        if (c == '\t' || c == ' ') continue;
        if (c >= 0x21 && c != 0x7f) continue; // VCHAR and obs-text
        return false;
    }
    return true;
}

std::string_view trim_ows(std::string_view s)
{
    size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
    return s.substr(b, e - b);
}

// Header section must use CRLF line endings exclusively; a CR not followed
// by LF or an LF without a CR is an evasion primitive and is rejected.
void check_line_discipline(std::string_view section)
{
    for (size_t i = 0; i < section.size(); ++i) {
        if (section[i] == '\r') {
            if (i + 1 >= section.size() || section[i + 1] != '\n')
                throw MalformedRequest("bare CR in header section");
            ++i;
        } else if (section[i] == '\n') {
            throw MalformedRequest("bare LF line ending");
        }
    }
}

std::vector<std::string_view> split_crlf_lines(std::string_view section)
{
    std::vector<std::string_view> lines;
    size_t pos = 0;
    while (pos < section.size()) {
        size_t nl = section.find(kCrlf, pos);
        if (nl == std::string_view::npos) {
            lines.push_back(section.substr(pos));
            break;
        }
        lines.push_back(section.substr(pos, nl - pos));
        pos = nl + 2;
    }
    return lines;
}

uint64_t parse_decimal(std::string_view s, const char* what)
{
    if (s.empty()) throw MalformedRequest(std::string(what) + " is empty");
    for (char c : s)
        if (c < '0' || c > '9')
            throw MalformedRequest(std::string(what) + " is not a decimal integer");
    uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw MalformedRequest(std::string(what) + " out of range");
    return value;
}

// Strict chunked decoding: hex size (no extensions), exact CRLF framing,
// zero chunk followed by a bare CRLF (no trailers), nothing after it.
Bytes decode_chunked(std::string_view body)
{
    Bytes out;
    size_t pos = 0;
    for (;;) {
        size_t nl = body.find(kCrlf, pos);
        if (nl == std::string_view::npos)
            throw MalformedRequest("chunked body: missing chunk-size line");
        std::string_view size_str = body.substr(pos, nl - pos);
        if (size_str.empty())
            throw MalformedRequest("chunked body: empty chunk-size");
        uint64_t size = 0;
        for (char c : size_str) {
            int v;
            if (c >= '0' && c <= '9') v = c - '0';
            else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
            else throw MalformedRequest("chunked body: non-hex chunk-size");
            if (size > (uint64_t(1) << 40))
                throw MalformedRequest("chunked body: chunk too large");
            size = size * 16 + static_cast<uint64_t>(v);
        }
        pos = nl + 2;
        if (size == 0) {
            if (body.substr(pos) != kCrlf)
                throw MalformedRequest("chunked body: data after final chunk");
            return out;
        }
        if (pos + size + 2 > body.size())
            throw MalformedRequest("chunked body: truncated chunk data");
        out.append(body.substr(pos, size));
        pos += size;
        if (body.substr(pos, 2) != kCrlf)
            throw MalformedRequest("chunked body: chunk data not CRLF-terminated");
        pos += 2;
    }
}

struct Framing {
    std::optional<uint64_t> content_length;
    bool chunked = false;
};

Framing analyze_framing(const HeaderMap& headers)
{
    Framing f;
    if (headers.count("content-length") > 1)
        throw MalformedRequest("duplicate Content-Length");
    if (auto cl = headers.get("content-length"))
        f.content_length = parse_decimal(trim_ows(*cl), "Content-Length");
    size_t te_count = headers.count("transfer-encoding");
    if (te_count > 1)
        throw MalformedRequest("multiple Transfer-Encoding headers");
    if (auto te = headers.get("transfer-encoding")) {
        if (!ascii_iequals(trim_ows(*te), "chunked"))
            throw MalformedRequest("unsupported Transfer-Encoding");
        f.chunked = true;
    }
    if (f.chunked && f.content_length)
        throw MalformedRequest("Content-Length conflicts with Transfer-Encoding");
    return f;
}

} // namespace

HttpEnvelope parse_envelope(std::string_view bytes)
{
    if (bytes.empty()) throw MalformedRequest("empty input");

    size_t header_end = bytes.find("\r\n\r\n");
    if (header_end == std::string_view::npos) {
        check_line_discipline(bytes); // surface bare CR/LF first, it is the sharper signal
        throw MalformedRequest("missing final CRLF CRLF");
    }
    std::string_view head = bytes.substr(0, header_end);
    std::string_view rest = bytes.substr(header_end + 4);
    check_line_discipline(head);

    auto lines = split_crlf_lines(head);
    if (lines.empty() || lines[0].empty())
        throw MalformedRequest("empty request line");

    // request line: method SP request-target SP HTTP-version, single spaces
    std::string_view rl = lines[0];
    size_t sp1 = rl.find(' ');
    size_t sp2 = rl.rfind(' ');
    if (sp1 == std::string_view::npos || sp2 == sp1)
        throw MalformedRequest("malformed request line");

    HttpEnvelope env;
    env.method = std::string(rl.substr(0, sp1));
    env.target = Bytes(rl.substr(sp1 + 1, sp2 - sp1 - 1));
    std::string_view version = rl.substr(sp2 + 1);
    if (!is_token(env.method))
        throw MalformedRequest("method is not a token");
    if (env.target.empty())
        throw MalformedRequest("empty request-target");
    for (unsigned char c : env.target)
        if (c <= 0x20 || c == 0x7f)
            throw MalformedRequest("request-target contains whitespace or control bytes");
    if (version == "HTTP/1.1") env.version = HttpVersion::v1_1;
    else if (version == "HTTP/1.0") env.version = HttpVersion::v1_0;
    else throw MalformedRequest("unsupported HTTP version");

    for (size_t i = 1; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (line.empty())
            throw MalformedRequest("empty header line");
        if (line[0] == ' ' || line[0] == '\t')
            throw MalformedRequest("obsolete line folding");
        size_t colon = line.find(':');
        if (colon == std::string_view::npos)
            throw MalformedRequest("header line without colon");
        std::string_view name = line.substr(0, colon);
        if (!is_token(name))
            throw MalformedRequest("header name is not a token");
        std::string_view value = trim_ows(line.substr(colon + 1));
        if (!valid_field_value(value))
            throw MalformedRequest("control byte in header value");
        env.headers.add(std::string(name), std::string(value));
    }

    Framing framing = analyze_framing(env.headers);
    if (framing.chunked) {
        env.body = decode_chunked(rest);
        // Re-frame the logical body so serialize -> parse is a fixpoint.
        HeaderMap reframed;
        for (const auto& [n, v] : env.headers.entries()) {
            if (ascii_iequals(n, "transfer-encoding")) continue;
            reframed.add(n, v);
        }
        reframed.add("Content-Length", std::to_string(env.body.size()));
        env.headers = std::move(reframed);
    } else if (framing.content_length) {
        if (rest.size() != *framing.content_length)
            throw MalformedRequest("body length does not match Content-Length");
        env.body = Bytes(rest);
    } else {
        if (!rest.empty())
            throw MalformedRequest("body present without Content-Length");
    }
    return env;
}

Bytes serialize_envelope(const HttpEnvelope& env)
{
    Bytes out;
    out.append(env.method);
    out.push_back(' ');
    out.append(env.target);
    out.push_back(' ');
    out.append(env.version == HttpVersion::v1_1 ? "HTTP/1.1" : "HTTP/1.0");
    out.append(kCrlf);
    for (const auto& [n, v] : env.headers.entries()) {
        out.append(n);
        out.append(": ");
        out.append(v);
        out.append(kCrlf);
    }
    out.append(kCrlf);
    out.append(env.body);
    return out;
}

std::optional<ResponseRecord> parse_response(std::string_view bytes, bool stream_done,
                                             size_t* consumed)
{
    size_t header_end = bytes.find("\r\n\r\n");
    if (header_end == std::string_view::npos) return std::nullopt;
    std::string_view head = bytes.substr(0, header_end);
    std::string_view rest = bytes.substr(header_end + 4);

    auto lines = split_crlf_lines(head);
    if (lines.empty()) return std::nullopt;
    std::string_view sl = lines[0];
    if (sl.size() < 12 || sl.substr(0, 5) != "HTTP/")
        throw MalformedRequest("malformed status line");
    size_t sp1 = sl.find(' ');
    if (sp1 == std::string_view::npos || sp1 + 4 > sl.size())
        throw MalformedRequest("malformed status line");
    std::string_view code = sl.substr(sp1 + 1, 3);
    ResponseRecord rec;
    rec.status = 0;
    for (char c : code) {
        if (c < '0' || c > '9') throw MalformedRequest("non-numeric status code");
        rec.status = rec.status * 10 + (c - '0');
    }
    if (rec.status < 100 || rec.status > 599)
        throw MalformedRequest("status code out of range");

    for (size_t i = 1; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        size_t colon = line.find(':');
        if (colon == std::string_view::npos || colon == 0)
            throw MalformedRequest("malformed response header");
        rec.headers.add(std::string(line.substr(0, colon)),
                        std::string(trim_ows(line.substr(colon + 1))));
    }

    Framing framing = analyze_framing(rec.headers);
    if (framing.chunked) {
        // locate the end of the chunked stream before decoding
        size_t pos = 0;
        for (;;) {
            size_t nl = rest.find(kCrlf, pos);
            if (nl == std::string_view::npos) return std::nullopt;
            uint64_t size = 0;
            std::string_view size_str = rest.substr(pos, nl - pos);
            if (size_str.empty()) throw MalformedRequest("chunked body: empty chunk-size");
            for (char c : size_str) {
                int v;
                if (c >= '0' && c <= '9') v = c - '0';
                else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
                else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
                else throw MalformedRequest("chunked body: non-hex chunk-size");
                size = size * 16 + static_cast<uint64_t>(v);
            }
            pos = nl + 2;
            if (size == 0) {
                if (pos + 2 > rest.size()) return std::nullopt;
                pos += 2;
                rec.body = decode_chunked(rest.substr(0, pos));
                if (consumed) *consumed = header_end + 4 + pos;
                return rec;
            }
            if (pos + size + 2 > rest.size()) return std::nullopt;
            pos += size + 2;
        }
    }
    if (framing.content_length) {
        if (rest.size() < *framing.content_length) return std::nullopt;
        rec.body = Bytes(rest.substr(0, *framing.content_length));
        if (consumed) *consumed = header_end + 4 + *framing.content_length;
        return rec;
    }
    // no framing header: body runs to end of stream
    if (!stream_done) return std::nullopt;
    rec.body = Bytes(rest);
    if (consumed) *consumed = bytes.size();
    return rec;
}

std::optional<std::pair<std::string, int>> host_port(const HttpEnvelope& env)
{
    auto h = env.headers.get("host");
    if (!h || h->empty()) return std::nullopt;
    std::string_view host = *h;
    int port = 80;
    size_t colon = host.rfind(':');
    if (colon != std::string_view::npos && host.find(']') == std::string_view::npos) {
        std::string_view p = host.substr(colon + 1);
        if (p.empty()) return std::nullopt;
        int value = 0;
        for (char c : p) {
            if (c < '0' || c > '9') return std::nullopt;
            value = value * 10 + (c - '0');
            if (value > 65535) return std::nullopt;
        }
        port = value;
        host = host.substr(0, colon);
    }
    if (host.empty()) return std::nullopt;
    return std::make_pair(ascii_lower(host), port);
}

} // namespace waf
