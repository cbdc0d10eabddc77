// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/gateway.hpp"
#include "support/fixtures.hpp"
#include "support/net_helpers.hpp"

using namespace waf;

namespace {

struct Rig {
    test_net::StubUpstream upstream;
    std::shared_ptr<const ModelSet> model;
    std::unique_ptr<Gateway> gateway;

    explicit Rig(const std::string& model_json, const std::string& app_id,
                 std::string upstream_body = "payload-0123456789",
                 std::string content_type = "text/plain")
        : upstream(std::move(upstream_body), std::move(content_type)),
          model(std::make_shared<ModelSet>(load_model(model_json)))
    {
        GatewayConfig config;
        config.listen_address = "127.0.0.1";
        config.listen_port = 0;
        config.upstreams[app_id] = {"127.0.0.1", upstream.port()};
        config.log_path = "/dev/null";
        gateway = std::make_unique<Gateway>(model, config);
        gateway->start();
    }

    ~Rig() { gateway->stop(); }

    std::string send(const std::string& bytes)
    {
        return test_net::roundtrip(gateway->port(), bytes);
    }
};

} // namespace

TEST_CASE("allowed requests pass through and the response is byte-identical")
{
    Rig rig(fixtures::news_model(), "news");
    std::string response = rig.send(fixtures::get_request("news.example",
                                                          "/articles/2005/03/"));
    CHECK(rig.upstream.hits() == 1);
    REQUIRE(response.find("\r\n\r\n") != std::string::npos);
    CHECK(response.substr(response.find("\r\n\r\n") + 4) == rig.upstream.body());
    CHECK(response.starts_with("HTTP/1.1 200"));

    // the upstream saw a semantically identical request
    auto seen = rig.upstream.requests();
    REQUIRE(seen.size() == 1);
    auto env = parse_envelope(seen[0]);
    CHECK(env.method == "GET");
    CHECK(env.target == "/articles/2005/03/");
    CHECK(env.headers.get("host").value() == "news.example");
}

TEST_CASE("blocked requests never reach the upstream")
{
    Rig rig(fixtures::news_model(), "news");
    std::string response = rig.send(fixtures::get_request("news.example", "/other/"));
    CHECK(response.starts_with("HTTP/1.1 403"));
    CHECK(response.find("violation_id") != std::string::npos);
    CHECK(rig.upstream.hits() == 0);
    CHECK(rig.gateway->exchanges_blocked() == 1);
}

TEST_CASE("malformed requests get 400 and are never forwarded")
{
    Rig rig(fixtures::news_model(), "news");
    std::string response =
        rig.send("GET / HTTP/1.1\r\nHost: news.example\r\nContent-Length: 2\r\n"
                 "Content-Length: 3\r\n\r\nab");
    CHECK(response.starts_with("HTTP/1.1 400"));
    CHECK(rig.upstream.hits() == 0);
}

TEST_CASE("unknown hosts are blocked under the default policy")
{
    Rig rig(fixtures::news_model(), "news");
    std::string response = rig.send(fixtures::get_request("stranger.example", "/"));
    CHECK(response.starts_with("HTTP/1.1 403"));
    CHECK(rig.upstream.hits() == 0);
}

TEST_CASE("upstream failure maps to 502 after the request was allowed")
{
    auto model = std::make_shared<ModelSet>(load_model(fixtures::news_model()));
    GatewayConfig config;
    config.listen_address = "127.0.0.1";
    config.upstreams["news"] = {"127.0.0.1", 1}; // nothing listens there
    config.log_path = "/dev/null";
    config.connect_timeout_ms = 300;
    Gateway gateway(model, config);
    gateway.start();
    std::string response = test_net::roundtrip(
        gateway.port(), fixtures::get_request("news.example", "/articles/2005/"));
    CHECK(response.starts_with("HTTP/1.1 502"));
    gateway.stop();
}

TEST_CASE("a missing upstream for a modeled app refuses to start")
{
    auto model = std::make_shared<ModelSet>(load_model(fixtures::news_model()));
    GatewayConfig config;
    config.listen_address = "127.0.0.1";
    Gateway gateway(model, config);
    CHECK_THROWS_WITH_AS(gateway.start(), doctest::Contains("no upstream"),
                         std::runtime_error);
}

TEST_CASE("logout clears session state before the next request on that session")
{
    Rig rig(fixtures::authdemo_model(), "authdemo",
            fixtures::token_page("tokA"), "text/html");

    // login page: harvest the CSRF token (no cookie yet, session keyed by peer)
    std::string r1 = rig.send(fixtures::get_request("auth.example", "/login"));
    CHECK(r1.starts_with("HTTP/1.1 200"));

    // login response issues the session cookie; the state re-keys to its value
    rig.upstream.set_extra_headers({"Set-Cookie: sessionid=S1; Path=/"});
    std::string r2 = rig.send(fixtures::post_request(
        "auth.example", "/login", "csrftoken=tokA",
        "application/x-www-form-urlencoded"));
    CHECK(r2.starts_with("HTTP/1.1 200"));
    rig.upstream.set_extra_headers({});

    // authenticated non-idempotent request with cookie and token passes
    std::string r3 = rig.send(fixtures::post_request(
        "auth.example", "/profile", "csrftoken=tokA",
        "application/x-www-form-urlencoded", {{"Cookie", "sessionid=S1"}}));
    CHECK(r3.starts_with("HTTP/1.1 200"));

    // a stale token on the same session is rejected without upstream contact
    size_t hits_before = rig.upstream.hits();
    std::string r4 = rig.send(fixtures::post_request(
        "auth.example", "/profile", "csrftoken=WRONG",
        "application/x-www-form-urlencoded", {{"Cookie", "sessionid=S1"}}));
    CHECK(r4.starts_with("HTTP/1.1 403"));
    CHECK(rig.upstream.hits() == hits_before);

    // logout is forwarded, then the session is torn down
    std::string r5 = rig.send(fixtures::post_request(
        "auth.example", "/exit", "csrftoken=tokA",
        "application/x-www-form-urlencoded", {{"Cookie", "sessionid=S1"}}));
    CHECK(r5.starts_with("HTTP/1.1 200"));

    // the previously valid session id now fails before reaching the upstream
    size_t hits_after_exit = rig.upstream.hits();
    std::string r6 = rig.send(fixtures::get_request(
        "auth.example", "/profile", {{"Cookie", "sessionid=S1"}}));
    CHECK(r6.starts_with("HTTP/1.1 403"));
    CHECK(rig.upstream.hits() == hits_after_exit);
}

TEST_CASE("concurrent clients are served independently")
{
    Rig rig(fixtures::news_model(), "news");
    std::vector<std::thread> workers;
    std::atomic<int> ok{0};
    for (int i = 0; i < 8; ++i) {
        workers.emplace_back([&rig, &ok, i] {
            std::string response = rig.send(fixtures::get_request(
                "news.example", "/articles/200" + std::to_string(i % 10) + "/"));
            if (response.starts_with("HTTP/1.1 200")) ++ok;
        });
    }
    for (auto& w : workers) w.join();
    CHECK(ok == 8);
    CHECK(rig.upstream.hits() == 8);
}
