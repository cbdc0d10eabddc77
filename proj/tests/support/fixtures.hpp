// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0
//
// Shared test fixtures: the three reference applications (news archive,
// online banking, auth demo), request builders and corpus helpers.

#ifndef WAFMODEL_TESTS_FIXTURES_HPP
#define WAFMODEL_TESTS_FIXTURES_HPP

#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "core/corpus.hpp"
#include "core/model.hpp"

namespace fixtures {

using nlohmann::json;

// ---- request builders ----

inline std::string get_request(const std::string& host, const std::string& target,
                               const std::vector<std::pair<std::string, std::string>>&
                                   headers = {})
{
    std::string out = "GET " + target + " HTTP/1.1\r\nHost: " + host + "\r\n";
    for (const auto& [k, v] : headers) out += k + ": " + v + "\r\n";
    out += "\r\n";
    return out;
}

inline std::string post_request(const std::string& host, const std::string& target,
                                const std::string& body,
                                const std::string& content_type =
                                    "application/x-www-form-urlencoded",
                                const std::vector<std::pair<std::string, std::string>>&
                                    headers = {})
{
    std::string out = "POST " + target + " HTTP/1.1\r\nHost: " + host + "\r\n";
    out += "Content-Type: " + content_type + "\r\n";
    out += "Content-Length: " + std::to_string(body.size()) + "\r\n";
    for (const auto& [k, v] : headers) out += k + ": " + v + "\r\n";
    out += "\r\n" + body;
    return out;
}

inline waf::RawExchange exchange(std::string id, std::string client,
                                 std::string request_bytes,
                                 std::optional<waf::ResponseRecord> response = std::nullopt)
{
    waf::RawExchange x;
    x.id = std::move(id);
    x.client_id = std::move(client);
    x.ts = "2026-01-01T00:00:00Z";
    x.request_bytes = std::move(request_bytes);
    x.response = std::move(response);
    return x;
}

inline waf::ResponseRecord response(int status, const std::string& body,
                                    const std::vector<std::pair<std::string, std::string>>&
                                        headers = {})
{
    waf::ResponseRecord r;
    r.status = status;
    for (const auto& [k, v] : headers) r.headers.add(k, v);
    r.body = body;
    return r;
}

// ---- the reconstructed Fig-style request (JSON import over a query string) ----

inline std::string fig1_target()
{
    return "/json-import.php?c=0&load%5B%5D=jquery-core,jquery-migrate&load%5B%5D=utils"
           "&ver=3.8.2&json=%7B%22firstName%22:%22%D0%98%D0%B2%D0%B0%D0%BD%22,"
           "%22lastName%22:%22%D0%98%D0%B2%D0%B0%D0%BD%D0%BE%D0%B2%22,"
           "%22address%22:%7B%22postalCode%22:101101%7D,"
           "%22phoneNumbers%22:[%22812123-1234%22,%22916123-4567%22]%7D";
}

inline std::string fig1_request()
{
    return "GET " + fig1_target() + " HTTP/1.1\r\nHost: app.example\r\n\r\n";
}

// url_split -> path_segments -> query_string -> json on the json value
inline json fig1_decode_tree()
{
    return json::parse(R"json({
      "step": {"decoder": "url_split", "target": "url"},
      "branches": [{"then": {
        "step": {"decoder": "path_segments", "target": "url.path"},
        "branches": [{"when": "exists(url.query)", "then": {
          "step": {"decoder": "query_string", "target": "url.query"},
          "branches": [{"when": "exists(url.query.json)", "then": {
            "step": {"decoder": "json", "target": "url.query.json"},
            "branches": []
          }}]
        }}]
      }}]
    })json");
}

// ---- news archive app (decision-list routing fixture) ----

inline json news_routing()
{
    return json::parse(R"json([
      {"when": "url.path.1 = articles AND url.path.2 =~ [0-9]{4} AND url.path.3 =~ [0-9]{2} AND url.path.4 =~ [0-9]+ AND absent(url.path.5)",
       "action": "View News",
       "bind": {"YEAR": "url.path.2", "MONTH": "url.path.3", "ARTICLE_ID": "url.path.4"}},
      {"when": "url.path.1 = articles AND url.path.2 =~ [0-9]{4} AND url.path.3 =~ [0-9]{2} AND absent(url.path.4)",
       "action": "Past Month Archive",
       "bind": {"YEAR": "url.path.2", "MONTH": "url.path.3"}},
      {"when": "url.path.1 = articles AND url.path.2 =~ [0-9]{4} AND absent(url.path.3)",
       "action": "Past Year Archive",
       "bind": {"YEAR": "url.path.2"}},
      {"when": "absent(url.path.1)", "action": "Home", "bind": {}}
    ])json");
}

inline json news_app(const std::string& ac_mode = "off")
{
    json app;
    app["app_id"] = "news";
    app["selectors"] = json::array({{{"host", "news.example"}, {"port", 80}}});
    app["decode_tree"] = json::parse(R"json({
      "step": {"decoder": "url_split", "target": "url"},
      "branches": [{"then": {
        "step": {"decoder": "path_segments", "target": "url.path"},
        "branches": []
      }}]
    })json");
    app["actions"] = json::parse(R"json([
      {"name": "View News", "idempotent": true, "public": true,
       "params": {"YEAR": {"required": true}, "MONTH": {"required": true},
                  "ARTICLE_ID": {"required": true}}},
      {"name": "Past Month Archive", "idempotent": true, "public": true,
       "params": {"YEAR": {"required": true}, "MONTH": {"required": true}}},
      {"name": "Past Year Archive", "idempotent": true, "public": true,
       "params": {"YEAR": {"required": true}}},
      {"name": "Home", "idempotent": true, "public": true, "params": {}}
    ])json");
    app["routing"] = news_routing();
    app["param_models"] = json::object();
    app["attributes"] = json::array();
    app["fsa"] = nullptr;
    app["access_control"] = json{{"mode", ac_mode},
                                 {"seed", json::array({"Home"})},
                                 {"parse_links", true},
                                 {"parse_forms", true}};
    return app;
}

inline std::string news_model(const std::string& ac_mode = "off")
{
    json doc;
    doc["apps"] = json::array({news_app(ac_mode)});
    return doc.dump();
}

// ---- banking app (use-case FSA fixture) ----

inline std::string banking_model()
{
    json app;
    app["app_id"] = "bank";
    app["selectors"] = json::array({{{"host", "bank.example"}, {"port", 80}}});
    app["decode_tree"] = json::parse(R"json({
      "step": {"decoder": "url_split", "target": "url"},
      "branches": [{"then": {
        "step": {"decoder": "path_segments", "target": "url.path"},
        "branches": []
      }}]
    })json");
    app["actions"] = json::parse(R"json([
      {"name": "View index", "idempotent": true, "public": true, "params": {}},
      {"name": "Password auth", "idempotent": false, "public": true, "params": {}},
      {"name": "Token auth", "idempotent": false, "public": true, "params": {}},
      {"name": "View account", "idempotent": true, "public": true, "params": {}},
      {"name": "Text code", "idempotent": false, "public": true, "params": {}},
      {"name": "Transfer funds", "idempotent": false, "public": true, "params": {}},
      {"name": "View help", "idempotent": true, "public": true, "params": {}}
    ])json");
    app["routing"] = json::parse(R"json([
      {"when": "url.path.1 = index", "action": "View index", "bind": {}},
      {"when": "url.path.1 = auth AND url.path.2 = password", "action": "Password auth", "bind": {}},
      {"when": "url.path.1 = auth AND url.path.2 = token", "action": "Token auth", "bind": {}},
      {"when": "url.path.1 = account", "action": "View account", "bind": {}},
      {"when": "url.path.1 = code", "action": "Text code", "bind": {}},
      {"when": "url.path.1 = transfer", "action": "Transfer funds", "bind": {}},
      {"when": "url.path.1 = help", "action": "View help", "bind": {}}
    ])json");
    app["param_models"] = json::object();
    app["attributes"] = json::array();
    app["fsa"] = json::parse(R"json({
      "start": "s0",
      "transitions": [
        {"from": "s0", "on": "View index", "to": "s1"},
        {"from": "s1", "on": "Password auth", "to": "s2"},
        {"from": "s2", "on": "Token auth", "to": "s3"},
        {"from": "s3", "on": "View account", "to": "s3"},
        {"from": "s3", "on": "Text code", "to": "s4"},
        {"from": "s4", "on": "Transfer funds", "to": "s3"}
      ]
    })json");
    app["access_control"] = json{{"mode", "off"}, {"seed", json::array()}};
    json doc;
    doc["apps"] = json::array({app});
    return doc.dump();
}

inline const char* kBankPaths[] = {"/index", "/auth/password", "/auth/token",
                                   "/account", "/code", "/transfer", "/help"};

inline std::string bank_get(const std::string& path)
{
    return get_request("bank.example", path);
}

// ---- auth demo app (session attribute lifecycle fixture) ----

inline std::string authdemo_model()
{
    json app;
    app["app_id"] = "authdemo";
    app["selectors"] = json::array({{{"host", "auth.example"}, {"port", 80}}});
    app["decode_tree"] = json::parse(R"json({
      "step": {"decoder": "url_split", "target": "url"},
      "branches": [{"then": {
        "step": {"decoder": "path_segments", "target": "url.path"},
        "branches": [{"when": "header.content-type ^= application/x-www-form-urlencoded",
                      "then": {"step": {"decoder": "form_urlencoded", "target": "body"},
                               "branches": []}}]
      }}]
    })json");
    app["actions"] = json::parse(R"json([
      {"name": "Login Page", "idempotent": true, "public": true, "params": {}},
      {"name": "Do Login", "idempotent": false, "public": true, "params": {}},
      {"name": "View Profile", "idempotent": true, "public": false, "params": {}},
      {"name": "Edit Profile", "idempotent": false, "public": false, "params": {}},
      {"name": "Exit", "idempotent": false, "public": false, "params": {}}
    ])json");
    app["routing"] = json::parse(R"json([
      {"when": "request.method = GET AND url.path.1 = login", "action": "Login Page", "bind": {}},
      {"when": "request.method = POST AND url.path.1 = login", "action": "Do Login", "bind": {}},
      {"when": "request.method = GET AND url.path.1 = profile", "action": "View Profile", "bind": {}},
      {"when": "request.method = POST AND url.path.1 = profile", "action": "Edit Profile", "bind": {}},
      {"when": "request.method = POST AND url.path.1 = exit", "action": "Exit", "bind": {}}
    ])json");
    app["param_models"] = json::object();
    app["attributes"] = json::parse(R"json([
      {"name": "session id",
       "set": {"locator": {"kind": "set_cookie", "name": "sessionid"},
               "on_actions": ["Do Login"]},
       "verify": {"locator": {"kind": "cookie", "name": "sessionid"},
                  "scope": "non_public"},
       "invalidate": {"on_actions": ["Exit"], "clears": "all"}},
      {"name": "CSRF token",
       "set": {"locator": {"kind": "body_regex",
                           "pattern": "name=\"csrftoken\" value=\"([A-Za-z0-9]+)\""},
               "on_actions": "any"},
       "verify": {"locator": {"kind": "tree", "address": "body.csrftoken"},
                  "scope": "non_idempotent"}}
    ])json");
    app["fsa"] = nullptr;
    app["access_control"] = json{{"mode", "off"}, {"seed", json::array()}};
    app["session_key_attribute"] = "session id";
    json doc;
    doc["apps"] = json::array({app});
    return doc.dump();
}

inline std::string token_page(const std::string& token)
{
    return "<html><body><form action=\"/profile\" method=\"post\">"
           "<input type=\"hidden\" name=\"csrftoken\" value=\"" +
           token + "\"></form></body></html>";
}

// ---- corpus helpers ----

inline std::string corpus_text(const std::vector<waf::RawExchange>& exchanges)
{
    std::ostringstream out;
    waf::write_corpus(out, exchanges);
    return out.str();
}

// seeded generators for statistical fixtures

inline std::string random_hex_token(std::mt19937& rng, size_t length = 32)
{
    static const char* digits = "0123456789abcdef";
    std::uniform_int_distribution<int> pick(0, 15);
    std::string out;
    for (size_t i = 0; i < length; ++i) out.push_back(digits[pick(rng)]);
    return out;
}

inline std::string random_printable(std::mt19937& rng, size_t length = 32)
{
    std::uniform_int_distribution<int> pick(0x20, 0x7e);
    std::string out;
    for (size_t i = 0; i < length; ++i) out.push_back(static_cast<char>(pick(rng)));
    return out;
}

inline std::string random_email(std::mt19937& rng)
{
    static const char* names[] = {"alice", "bob", "carol", "dave", "erin", "frank",
                                  "grace", "heidi", "ivan", "judy"};
    static const char* hosts[] = {"example.com", "mail.test", "corp.example.org",
                                  "web.example.net"};
    std::uniform_int_distribution<int> name(0, 9), host(0, 3), num(1, 9999);
    return std::string(names[name(rng)]) + std::to_string(num(rng)) + "@" +
           hosts[host(rng)];
}

// Free-form user text: ordinary sentences mixed with the oddballs real input
// fields accumulate (pastes, ASCII art, number dumps, emoji, mashed keys).
// Several small distinct oddball classes, each extreme along its own feature
// direction; one big class would just inflate the pooled variance instead.
inline std::vector<std::string> free_text_corpus(std::mt19937& rng, size_t n)
{
    static const char* words[] = {
        "the",  "quick", "brown", "fox",   "jumps", "over",  "lazy",  "dog",
        "hello","world", "please","update","my",    "order", "thanks","again",
        "issue","with",  "login", "page",  "very",  "slow",  "today", "meeting",
        "notes","draft", "final", "report","budget","review"};
    std::uniform_int_distribution<int> word(0, 29), len(4, 14), kind(0, 99),
        digits(30, 80), punct_len(30, 60), repeat_len(40, 120);
    std::vector<std::string> out;
    auto sentence = [&](int m) {
        std::string s;
        for (int w = 0; w < m; ++w) {
            if (w) s += " ";
            s += words[word(rng)];
        }
        return s;
    };
    for (size_t i = 0; i < n; ++i) {
        int k = kind(rng);
        std::string s;
        if (k < 54 || k >= 96) { // plain sentence
            s = sentence(len(rng)) + ".";
        } else if (k < 64) { // short interjection
            s = (k % 2) ? "ok" : "thanks!";
        } else if (k < 69) { // russian sentence
            s = "привет, как дела? всё хорошо";
        } else if (k < 74) { // a date in prose
            s = "meeting notes for 2026-0" + std::to_string(1 + k % 9) +
                "-15 " + sentence(4);
        } else if (k < 78) { // url in prose
            s = "see https://status.example/incident?id=" + std::to_string(word(rng));
        } else if (k < 83) { // shouting
            s = "THIS IS URGENT PLEASE FIX ASAP NOW!";
        } else if (k < 86) { // pasted paragraph
            s = sentence(80 + word(rng) * 4);
        } else if (k < 89) { // ascii art
            int m = punct_len(rng);
            static const char* art = "-=+*#~^<>|/\\!?.";
            for (int c = 0; c < m; ++c) s += art[rng() % 15];
        } else if (k < 92) { // number dump
            int m = digits(rng);
            for (int c = 0; c < m; ++c) s += static_cast<char>('0' + rng() % 10);
        } else if (k < 95) { // emoji run
            int m = 10 + static_cast<int>(rng() % 20);
            for (int c = 0; c < m; ++c) s += (c % 2) ? "\xF0\x9F\x94\xA5" : "\xE2\x9C\xA8";
        } else { // leaned-on key
            s = std::string(static_cast<size_t>(repeat_len(rng)), 'a');
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace fixtures

#endif
