// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef WAFMODEL_CORE_BYTES_HPP
#define WAFMODEL_CORE_BYTES_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace waf {

// Byte payloads are carried as std::string throughout; values coming off the
// wire are not assumed to be text until something asks for a text view.
using Bytes = std::string;

// ---- ascii helpers ----

bool ascii_iequals(std::string_view a, std::string_view b);
std::string ascii_lower(std::string_view s);
bool is_tchar(unsigned char c);          // RFC 7230 token character
bool is_token(std::string_view s);       // non-empty, all tchar

// ---- base64 (standard alphabet, strict padding) ----

std::string base64_encode(std::string_view raw);
// Rejects characters outside the alphabet, bad padding, trailing garbage.
std::optional<Bytes> base64_decode(std::string_view enc);

// ---- percent encoding ----

// Strict %XX decoding. plus_as_space handles the query/form convention.
// Returns nullopt on a truncated or non-hex escape.
std::optional<Bytes> percent_decode(std::string_view s, bool plus_as_space);
std::string percent_encode(std::string_view raw);

// ---- utf-8 ----

// Decodes one code point starting at s[pos]. Invalid sequences yield
// U+FFFD with width 1 so iteration is total over arbitrary bytes.
struct Utf8Step {
    char32_t cp;
    int width;
    bool valid;
};
Utf8Step utf8_step(std::string_view s, size_t pos);
bool utf8_valid(std::string_view s);

// Printable rendering for logs and tree dumps: valid UTF-8 without control
// bytes prints as-is, anything else is \xNN-escaped. Truncates to max_bytes
// at a code point boundary and appends an ellipsis with the full length.
std::string printable(std::string_view s, size_t max_bytes = 48);

} // namespace waf

#endif
