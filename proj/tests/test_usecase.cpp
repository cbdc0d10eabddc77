// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/model.hpp"
#include "support/fixtures.hpp"

using namespace waf;

namespace {

const AppModel& bank()
{
    static ModelSet model = load_model(fixtures::banking_model());
    return model.apps[0];
}

// runs a sequence of actions through the FSA, returns states and violations
std::pair<std::string, std::vector<std::string>> run_fsa(
    const std::vector<std::string>& actions)
{
    std::string state = bank().fsa.start;
    std::vector<std::string> violations;
    for (const auto& action : actions) {
        FsaStepResult step = fsa_step(bank().fsa, state, action);
        if (step.violation) violations.push_back(action);
        state = step.next;
    }
    return {state, violations};
}

} // namespace

TEST_CASE("the authorization chain passes cleanly")
{
    auto [state, violations] =
        run_fsa({"View index", "Password auth", "Token auth", "View account"});
    CHECK(violations.empty());
    CHECK(state == "s3");

    SUBCASE("view account is repeatable")
    {
        auto [s2, v2] = run_fsa({"View index", "Password auth", "Token auth",
                                 "View account", "View account", "View account"});
        CHECK(v2.empty());
        CHECK(s2 == "s3");
    }
}

TEST_CASE("transfer without the text code is an order violation")
{
    auto [state, violations] = run_fsa(
        {"View index", "Password auth", "Token auth", "View account", "Transfer funds"});
    REQUIRE(violations.size() == 1);
    CHECK(violations[0] == "Transfer funds");
    CHECK(state == "s3"); // violation leaves the state untouched

    SUBCASE("with the code the transfer is fine and the machine loops to s3")
    {
        auto [s2, v2] = run_fsa({"View index", "Password auth", "Token auth",
                                 "Text code", "Transfer funds"});
        CHECK(v2.empty());
        CHECK(s2 == "s3");
    }
}

TEST_CASE("transfer before key authorization is an order violation")
{
    auto [state, violations] =
        run_fsa({"View index", "Password auth", "Transfer funds"});
    REQUIRE(violations.size() == 1);
    CHECK(state == "s2");
}

TEST_CASE("actions outside the alphabet pass through any state")
{
    auto [state, violations] =
        run_fsa({"View help", "View index", "View help", "Password auth", "View help"});
    CHECK(violations.empty());
    CHECK(state == "s2");
}

TEST_CASE("adding unconstrained actions to a trace never introduces violations")
{
    std::vector<std::string> base = {"View index", "Password auth", "Token auth",
                                     "Text code", "Transfer funds"};
    auto [s0, v0] = run_fsa(base);
    REQUIRE(v0.empty());
    for (size_t at = 0; at <= base.size(); ++at) {
        std::vector<std::string> padded = base;
        padded.insert(padded.begin() + static_cast<long>(at), "View help");
        auto [s1, v1] = run_fsa(padded);
        CHECK(v1.empty());
        CHECK(s1 == s0);
    }
}

TEST_CASE("fsa_step is a pure function of state and action")
{
    for (int i = 0; i < 3; ++i) {
        FsaStepResult a = fsa_step(bank().fsa, "s3", "Text code");
        CHECK(a.next == "s4");
        CHECK_FALSE(a.violation.has_value());
        FsaStepResult b = fsa_step(bank().fsa, "s3", "Transfer funds");
        CHECK(b.next == "s3");
        CHECK(b.violation.has_value());
    }
}

// ---- offered-action extraction ----

namespace {

struct NewsSetup {
    ModelSet model;
    explicit NewsSetup(const std::string& mode)
        : model(load_model(fixtures::news_model(mode)))
    {
    }
    const AppModel& app() const { return model.apps[0]; }

    AllowedSet extract(const ResponseRecord& resp)
    {
        UrlParts base{"http", "news.example", 80, "/"};
        return extract_offered_actions(resp, base, app().decode_tree,
                                       DecoderRegistry::built_in(), app().routing,
                                       app().catalog, app().ac, app().selectors);
    }
};

} // namespace

TEST_CASE("anchor extraction pins the routed actuals in instance mode")
{
    NewsSetup s("instance_level");
    auto resp = fixtures::response(
        200, "<html><a href=\"/articles/2005/\">year 2005</a></html>",
        {{"Content-Type", "text/html; charset=utf-8"}});
    AllowedSet delta = s.extract(resp);
    REQUIRE(delta.entries.size() == 1);
    const AllowedEntry& entry = *delta.entries.begin();
    CHECK(entry.action == "Past Year Archive");
    CHECK(entry.pinned == std::map<std::string, std::string>{{"YEAR", "2005"}});
}

TEST_CASE("empty body and non-html responses contribute nothing")
{
    NewsSetup s("instance_level");
    CHECK(s.extract(fixtures::response(200, "", {{"Content-Type", "text/html"}}))
              .entries.empty());
    CHECK(s.extract(fixtures::response(
                        200, "<a href=\"/articles/2005/\">x</a>",
                        {{"Content-Type", "application/json"}}))
              .entries.empty());
}

TEST_CASE("unroutable and external links are ignored")
{
    NewsSetup s("instance_level");
    auto resp = fixtures::response(
        200,
        "<a href=\"/not-modeled/\">x</a>"
        "<a href=\"https://elsewhere.example/articles/2005/\">x</a>"
        "<a href=\"javascript:alert(1)\">x</a>"
        "<a href=\"mailto:a@b\">x</a>",
        {{"Content-Type", "text/html"}});
    CHECK(s.extract(resp).entries.empty());
}

TEST_CASE("relative links resolve against the base url")
{
    NewsSetup s("instance_level");
    UrlParts base{"http", "news.example", 80, "/articles/2005/"};
    auto resp = fixtures::response(200, "<a href=\"../2006/\">next</a>",
                                   {{"Content-Type", "text/html"}});
    AllowedSet delta = extract_offered_actions(
        resp, base, s.app().decode_tree, DecoderRegistry::built_in(), s.app().routing,
        s.app().catalog, s.app().ac, s.app().selectors);
    REQUIRE(delta.entries.size() == 1);
    CHECK(delta.entries.begin()->pinned.at("YEAR") == "2006");
}

TEST_CASE("forms contribute sketches with hidden defaults")
{
    // a GET form whose inputs land in the query string
    nlohmann::json app = nlohmann::json::parse(fixtures::news_model("instance_level"))
                             ["apps"][0];
    app["decode_tree"] = fixtures::fig1_decode_tree();
    app["actions"].push_back(nlohmann::json::parse(
        R"json({"name": "Search", "idempotent": true, "public": true,
            "params": {"Q": {"required": true}, "TOKEN": {"required": true}}})json"));
    app["routing"].push_back(nlohmann::json::parse(
        R"json({"when": "url.path.1 = search", "action": "Search",
            "bind": {"Q": "url.query.q", "TOKEN": "url.query.tok"}})json"));
    nlohmann::json doc;
    doc["apps"] = nlohmann::json::array({app});
    ModelSet model = load_model(doc.dump());
    const AppModel& news = model.apps[0];

    auto resp = fixtures::response(
        200,
        "<form action=\"/search\" method=\"get\">"
        "<input type=\"text\" name=\"q\" value=\"defaults\">"
        "<input type=\"hidden\" name=\"tok\" value=\"t0k\">"
        "<input type=\"file\" name=\"upload\">"
        "</form>",
        {{"Content-Type", "text/html"}});
    UrlParts base{"http", "news.example", 80, "/"};
    AllowedSet delta = extract_offered_actions(resp, base, news.decode_tree,
                                               DecoderRegistry::built_in(), news.routing,
                                               news.catalog, news.ac, news.selectors);
    REQUIRE(delta.entries.size() == 1);
    const AllowedEntry& entry = *delta.entries.begin();
    CHECK(entry.action == "Search");
    CHECK(entry.pinned.at("Q") == "defaults");
    CHECK(entry.pinned.at("TOKEN") == "t0k");
}

TEST_CASE("every extracted entry routes back to its own action")
{
    NewsSetup s("instance_level");
    auto resp = fixtures::response(
        200,
        "<a href=\"/articles/2005/\">a</a>"
        "<a href=\"/articles/2006/\">b</a>"
        "<a href=\"/articles/2006/07/\">c</a>"
        "<a href=\"/\">home</a>",
        {{"Content-Type", "text/html"}});
    AllowedSet delta = s.extract(resp);
    REQUIRE(delta.entries.size() == 4);
    for (const auto& entry : delta.entries) {
        // rebuild the request this entry stands for and route it
        std::string target;
        if (entry.action == "Home") target = "/";
        else if (entry.action == "Past Year Archive")
            target = "/articles/" + entry.pinned.at("YEAR") + "/";
        else if (entry.action == "Past Month Archive")
            target = "/articles/" + entry.pinned.at("YEAR") + "/" +
                     entry.pinned.at("MONTH") + "/";
        auto env = parse_envelope(fixtures::get_request("news.example", target));
        auto tree =
            run_decision_tree(env, s.app().decode_tree, DecoderRegistry::built_in()).tree;
        RouteOutcome routed = route(tree, s.app().routing, s.app().catalog);
        REQUIRE(routed.instance.has_value());
        CHECK(routed.instance->action == entry.action);
    }
}

TEST_CASE("check_allowed: seeds always pass, pins must match in instance mode")
{
    NewsSetup s("instance_level");
    AllowedSet allowed;
    allowed.entries.insert({"Past Year Archive", {{"YEAR", "2005"}}});

    ActionInstance home;
    home.action = "Home";
    CHECK_FALSE(check_allowed(allowed, home, s.app().ac).has_value());

    ActionInstance year2005;
    year2005.action = "Past Year Archive";
    year2005.actuals["YEAR"] = "2005";
    CHECK_FALSE(check_allowed(allowed, year2005, s.app().ac).has_value());

    ActionInstance year2006 = year2005;
    year2006.actuals["YEAR"] = "2006";
    auto violation = check_allowed(allowed, year2006, s.app().ac);
    REQUIRE(violation.has_value());
    CHECK(violation->code == "access_violation");

    SUBCASE("the same instance passes at action level")
    {
        NewsSetup action_mode("action_level");
        AllowedSet al;
        al.entries.insert({"Past Year Archive", {}});
        CHECK_FALSE(check_allowed(al, year2006, action_mode.app().ac).has_value());
    }
    SUBCASE("mode off never flags")
    {
        NewsSetup off("off");
        AllowedSet empty;
        CHECK_FALSE(check_allowed(empty, year2006, off.app().ac).has_value());
    }
}

TEST_CASE("html entities in attribute values are decoded")
{
    NewsSetup s("instance_level");
    auto resp = fixtures::response(
        200, "<a href=\"/articles/2005/?utm&amp;x=1\">x</a>",
        {{"Content-Type", "text/html"}});
    // the link resolves and routes (query is ignored by the predicates)
    AllowedSet delta = s.extract(resp);
    REQUIRE(delta.entries.size() == 1);
    CHECK(delta.entries.begin()->action == "Past Year Archive");
}
