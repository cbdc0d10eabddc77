// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Traffic corpora: newline-delimited JSON, one exchange per line, raw request
// bytes carried base64 so nothing on the wire is lost in transit.

#ifndef WAFMODEL_CORE_CORPUS_HPP
#define WAFMODEL_CORE_CORPUS_HPP

#include <iosfwd>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "core/http.hpp"

namespace waf {

struct RawExchange {
    std::string id;
    std::string client_id;
    std::string ts; // ISO-8601 UTC
    Bytes request_bytes;
    std::optional<ResponseRecord> response;

    bool operator==(const RawExchange&) const = default;
};

struct CorpusFormatError : std::runtime_error {
    size_t line_no;
    CorpusFormatError(size_t line, const std::string& reason)
        : std::runtime_error("line " + std::to_string(line) + ": " + reason),
          line_no(line) {}
};

// Streaming reader; exchanges come back in file order. Ids must be unique
// within the corpus (duplicates are a format error).
class CorpusReader {
public:
    explicit CorpusReader(std::istream& in) : in_(in) {}
    // Next exchange, or nullopt at end of stream.
    // Throws CorpusFormatError on a bad record.
    std::optional<RawExchange> next();
    size_t line_no() const { return line_no_; }

private:
    std::istream& in_;
    size_t line_no_ = 0;
    std::set<std::string> seen_ids_;
};

std::string exchange_to_json_line(const RawExchange& x);
RawExchange exchange_from_json_line(const std::string& line, size_t line_no);

void write_corpus(std::ostream& out, const std::vector<RawExchange>& exchanges);
std::vector<RawExchange> read_corpus(std::istream& in);

// Minimal HAR 1.2 subset converter (log.entries[].request/response).
// Reconstructs raw request bytes from the structured HAR record.
std::vector<RawExchange> har_to_exchanges(const std::string& har_json);

} // namespace waf

#endif
