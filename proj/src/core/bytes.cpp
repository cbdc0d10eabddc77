// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/bytes.hpp"

#include <array>
#include <cstdio>

namespace waf {

bool ascii_iequals(std::string_view a, std::string_view b)
{
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        unsigned char ca = static_cast<unsigned char>(a[i]);
        unsigned char cb = static_cast<unsigned char>(b[i]);
        if (ca >= 'A' && ca <= 'Z') ca = static_cast<unsigned char>(ca - 'A' + 'a');
        if (cb >= 'A' && cb <= 'Z') cb = static_cast<unsigned char>(cb - 'A' + 'a');
        if (ca != cb) return false;
    }
    return true;
}

std::string ascii_lower(std::string_view s)
{
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

bool is_tchar(unsigned char c)
{
    if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9'))
        return true;
    switch (c) {
    case '!': case '#': case '$': case '%': case '&': case '\'': case '*':
    case '+': case '-': case '.': case '^': case '_': case '`': case '|':
    case '~':
        return true;
    default:
        return false;
    }
}

bool is_token(std::string_view s)
{
    if (s.empty()) return false;
    for (unsigned char c : s)
        if (!is_tchar(c)) return false;
    return true;
}

static const char kB64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(std::string_view raw)
{
    std::string out;
    out.reserve((raw.size() + 2) / 3 * 4);
    size_t i = 0;
    while (i + 3 <= raw.size()) {
        uint32_t v = (static_cast<unsigned char>(raw[i]) << 16) |
                     (static_cast<unsigned char>(raw[i + 1]) << 8) |
                     static_cast<unsigned char>(raw[i + 2]);
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back(kB64Alphabet[v & 63]);
        i += 3;
    }
    size_t rem = raw.size() - i;
    if (rem == 1) {
        uint32_t v = static_cast<unsigned char>(raw[i]) << 16;
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back('=');
        out.push_back('=');
    } else if (rem == 2) {
        uint32_t v = (static_cast<unsigned char>(raw[i]) << 16) |
                     (static_cast<unsigned char>(raw[i + 1]) << 8);
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

static int b64_value(unsigned char c)
{
    if (c >= 'A' && c <= 'Z') return c - 'A';
    if (c >= 'a' && c <= 'z') return c - 'a' + 26;
    if (c >= '0' && c <= '9') return c - '0' + 52;
    if (c == '+') return 62;
    if (c == '/') return 63;
    return -1;
}

std::optional<Bytes> base64_decode(std::string_view enc)
{
    if (enc.size() % 4 != 0) return std::nullopt;
    Bytes out;
    out.reserve(enc.size() / 4 * 3);
    for (size_t i = 0; i < enc.size(); i += 4) {
        int pad = 0;
        int v[4];
        for (int k = 0; k < 4; ++k) {
            unsigned char c = static_cast<unsigned char>(enc[i + k]);
            if (c == '=') {
                // padding only in the last two positions of the final group
                if (i + 4 != enc.size() || k < 2) return std::nullopt;
                ++pad;
                v[k] = 0;
            } else {
                if (pad > 0) return std::nullopt; // data after '='
                v[k] = b64_value(c);
                if (v[k] < 0) return std::nullopt;
            }
        }
        uint32_t bits = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
        out.push_back(static_cast<char>((bits >> 16) & 0xff));
        if (pad < 2) out.push_back(static_cast<char>((bits >> 8) & 0xff));
        if (pad < 1) out.push_back(static_cast<char>(bits & 0xff));
    }
    return out;
}

static int hex_value(unsigned char c)
{
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

std::optional<Bytes> percent_decode(std::string_view s, bool plus_as_space)
{
    Bytes out;
    out.reserve(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '%') {
            if (i + 3 > s.size()) return std::nullopt;
            int hi = hex_value(static_cast<unsigned char>(s[i + 1]));
            int lo = hex_value(static_cast<unsigned char>(s[i + 2]));
            if (hi < 0 || lo < 0) return std::nullopt;
            out.push_back(static_cast<char>((hi << 4) | lo));
            i += 2;
        } else if (c == '+' && plus_as_space) {
            out.push_back(' ');
        } else {
            out.push_back(c);
        }
    }
    return out;
}

std::string percent_encode(std::string_view raw)
{
    static const char* hex = "0123456789ABCDEF";
    std::string out;
    for (unsigned char c : raw) {
        bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '.' ||
                    c == '_' || c == '~';
        if (keep) {
            out.push_back(static_cast<char>(c));
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 15]);
        }
    }
    return out;
}

Utf8Step utf8_step(std::string_view s, size_t pos)
{
    const unsigned char b0 = static_cast<unsigned char>(s[pos]);
    const size_t left = s.size() - pos;
    if (b0 < 0x80) return {b0, 1, true};
    int need;
    char32_t cp;
    if ((b0 & 0xe0) == 0xc0) { need = 1; cp = b0 & 0x1f; }
    else if ((b0 & 0xf0) == 0xe0) { need = 2; cp = b0 & 0x0f; }
    else if ((b0 & 0xf8) == 0xf0) { need = 3; cp = b0 & 0x07; }
    else return {0xFFFD, 1, false};
    if (left < static_cast<size_t>(need) + 1) return {0xFFFD, 1, false};
    for (int k = 1; k <= need; ++k) {
        unsigned char b = static_cast<unsigned char>(s[pos + k]);
        if ((b & 0xc0) != 0x80) return {0xFFFD, 1, false};
        cp = (cp << 6) | (b & 0x3f);
    }
    // reject overlong forms, surrogates, and out-of-range values
    if ((need == 1 && cp < 0x80) || (need == 2 && cp < 0x800) ||
        (need == 3 && cp < 0x10000) || cp > 0x10FFFF ||
        (cp >= 0xD800 && cp <= 0xDFFF))
        return {0xFFFD, 1, false};
    return {cp, need + 1, true};
}

bool utf8_valid(std::string_view s)
{
    size_t i = 0;
    while (i < s.size()) {
        Utf8Step st = utf8_step(s, i);
        if (!st.valid) return false;
        i += st.width;
    }
    return true;
}

std::string printable(std::string_view s, size_t max_bytes)
{
    std::string out;
    size_t i = 0;
    size_t emitted = 0;
    bool truncated = false;
    while (i < s.size()) {
        if (emitted >= max_bytes) { truncated = true; break; }
        Utf8Step st = utf8_step(s, i);
        unsigned char b = static_cast<unsigned char>(s[i]);
        if (st.valid && st.cp >= 0x20 && st.cp != 0x7f) {
            out.append(s.substr(i, st.width));
            i += st.width;
            emitted += st.width;
        } else {
            char buf[8];
            std::snprintf(buf, sizeof(buf), "\\x%02x", b);
            out.append(buf);
            i += 1;
            emitted += 1;
        }
    }
    if (truncated) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "… (%zu bytes)", s.size());
        out.append(buf);
    }
    return out;
}

} // namespace waf
