// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#include "core/corpus.hpp"

#include <istream>
#include <ostream>

#include <json.hpp>

namespace waf {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

HeaderMap headers_from_json(const json& arr, size_t line_no)
{
    HeaderMap out;
    if (!arr.is_array()) throw CorpusFormatError(line_no, "headers must be an array");
    for (const auto& pair : arr) {
        if (!pair.is_array() || pair.size() != 2 || !pair[0].is_string() || !pair[1].is_string())
            throw CorpusFormatError(line_no, "header entry must be [name, value]");
        out.add(pair[0].get<std::string>(), pair[1].get<std::string>());
    }
    return out;
}

json headers_to_json(const HeaderMap& headers)
{
    json arr = json::array();
    for (const auto& [n, v] : headers.entries())
        arr.push_back(json::array({n, v}));
    return arr;
}

std::string require_string(const json& obj, const char* key, size_t line_no)
{
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string())
        throw CorpusFormatError(line_no, std::string("missing string field '") + key + "'");
    return it->get<std::string>();
}

Bytes decode_b64_field(const json& obj, const char* key, size_t line_no)
{
    std::string enc = require_string(obj, key, line_no);
    auto raw = base64_decode(enc);
    if (!raw)
        throw CorpusFormatError(line_no, std::string("invalid base64 in '") + key + "'");
    return *raw;
}

} // namespace

RawExchange exchange_from_json_line(const std::string& line, size_t line_no)
{
    json obj;
    try {
        obj = json::parse(line);
    } catch (const json::exception& e) {
        throw CorpusFormatError(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object())
        throw CorpusFormatError(line_no, "record is not a JSON object");

    RawExchange x;
    x.id = require_string(obj, "id", line_no);
    x.client_id = require_string(obj, "client_id", line_no);
    x.ts = require_string(obj, "ts", line_no);
    x.request_bytes = decode_b64_field(obj, "request_b64", line_no);
    if (x.request_bytes.empty())
        throw CorpusFormatError(line_no, "request_b64 decodes to empty bytes");

    auto rit = obj.find("response");
    if (rit != obj.end() && !rit->is_null()) {
        if (!rit->is_object())
            throw CorpusFormatError(line_no, "response must be an object or null");
        ResponseRecord rec;
        auto sit = rit->find("status");
        if (sit == rit->end() || !sit->is_number_integer())
            throw CorpusFormatError(line_no, "response.status must be an integer");
        rec.status = sit->get<int>();
        if (rec.status < 100 || rec.status > 599)
            throw CorpusFormatError(line_no, "response.status out of range");
        auto hit = rit->find("headers");
        if (hit != rit->end()) rec.headers = headers_from_json(*hit, line_no);
        rec.body = decode_b64_field(*rit, "body_b64", line_no);
        x.response = std::move(rec);
    }
    return x;
}

std::string exchange_to_json_line(const RawExchange& x)
{
    ordered_json obj;
    obj["id"] = x.id;
    obj["client_id"] = x.client_id;
    obj["ts"] = x.ts;
    obj["request_b64"] = base64_encode(x.request_bytes);
    if (x.response) {
        ordered_json resp;
        resp["status"] = x.response->status;
        resp["headers"] = headers_to_json(x.response->headers);
        resp["body_b64"] = base64_encode(x.response->body);
        obj["response"] = std::move(resp);
    } else {
        obj["response"] = nullptr;
    }
    return obj.dump();
}

std::optional<RawExchange> CorpusReader::next()
{
    std::string line;
    while (std::getline(in_, line)) {
        ++line_no_;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        RawExchange x = exchange_from_json_line(line, line_no_);
        if (!seen_ids_.insert(x.id).second)
            throw CorpusFormatError(line_no_, "duplicate exchange id '" + x.id + "'");
        return x;
    }
    return std::nullopt;
}

void write_corpus(std::ostream& out, const std::vector<RawExchange>& exchanges)
{
    for (const auto& x : exchanges)
        out << exchange_to_json_line(x) << '\n';
}

std::vector<RawExchange> read_corpus(std::istream& in)
{
    std::vector<RawExchange> out;
    CorpusReader reader(in);
    while (auto x = reader.next())
        out.push_back(std::move(*x));
    return out;
}

std::vector<RawExchange> har_to_exchanges(const std::string& har_json)
{
    json har;
    try {
        har = json::parse(har_json);
    } catch (const json::exception& e) {
        throw CorpusFormatError(0, std::string("invalid HAR JSON: ") + e.what());
    }
    const json* entries = nullptr;
    if (har.contains("log") && har["log"].contains("entries"))
        entries = &har["log"]["entries"];
    if (!entries || !entries->is_array())
        throw CorpusFormatError(0, "HAR document has no log.entries array");

    std::vector<RawExchange> out;
    size_t n = 0;
    for (const auto& entry : *entries) {
        ++n;
        if (!entry.contains("request")) continue;
        const json& req = entry["request"];
        std::string method = req.value("method", "GET");
        std::string url = req.value("url", "");
        if (url.empty()) continue;

        // origin-form target: path + query from the absolute URL
        std::string target = "/";
        std::string host;
        size_t scheme = url.find("://");
        if (scheme != std::string::npos) {
            size_t path = url.find('/', scheme + 3);
            host = url.substr(scheme + 3, (path == std::string::npos ? url.size() : path) - scheme - 3);
            target = path == std::string::npos ? "/" : url.substr(path);
        } else {
            target = url;
        }
        size_t frag = target.find('#');
        if (frag != std::string::npos) target.resize(frag);

        HttpEnvelope env;
        env.method = method;
        env.target = target;
        env.version = HttpVersion::v1_1;
        bool have_host = false;
        if (req.contains("headers")) {
            for (const auto& h : req["headers"]) {
                std::string name = h.value("name", "");
                if (name.empty() || !is_token(name)) continue;
                if (ascii_iequals(name, "content-length") ||
                    ascii_iequals(name, "transfer-encoding"))
                    continue; // re-framed below
                if (ascii_iequals(name, "host")) have_host = true;
                env.headers.add(name, h.value("value", ""));
            }
        }
        if (!have_host && !host.empty()) env.headers.add("Host", host);
        if (req.contains("postData") && req["postData"].contains("text")) {
            env.body = req["postData"]["text"].get<std::string>();
            env.headers.add("Content-Length", std::to_string(env.body.size()));
        }

        RawExchange x;
        x.id = "har-" + std::to_string(n);
        x.client_id = "har";
        x.ts = entry.value("startedDateTime", "1970-01-01T00:00:00Z");
        x.request_bytes = serialize_envelope(env);

        if (entry.contains("response") && entry["response"].is_object()) {
            const json& resp = entry["response"];
            int status = resp.value("status", 0);
            if (status >= 100 && status <= 599) {
                ResponseRecord rec;
                rec.status = status;
                if (resp.contains("headers")) {
                    for (const auto& h : resp["headers"]) {
                        std::string name = h.value("name", "");
                        if (!name.empty())
                            rec.headers.add(name, h.value("value", ""));
                    }
                }
                if (resp.contains("content") && resp["content"].contains("text")) {
                    std::string text = resp["content"]["text"].get<std::string>();
                    if (resp["content"].value("encoding", "") == "base64") {
                        auto raw = base64_decode(text);
                        rec.body = raw ? *raw : Bytes(text);
                    } else {
                        rec.body = text;
                    }
                }
                x.response = std::move(rec);
            }
        }
        out.push_back(std::move(x));
    }
    return out;
}

} // namespace waf
