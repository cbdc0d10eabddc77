// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/model.hpp"
#include "support/fixtures.hpp"

using namespace waf;

namespace {

struct Setup {
    ModelSet model = load_model(fixtures::authdemo_model());
    const AppModel& app() { return model.apps[0]; }

    ParseTree tree(const std::string& raw)
    {
        return run_decision_tree(parse_envelope(raw), app().decode_tree,
                                 DecoderRegistry::built_in())
            .tree;
    }

    ActionInstance instance(const std::string& action)
    {
        ActionInstance i;
        i.action = action;
        return i;
    }
};

} // namespace

TEST_CASE("set-cookie locator feeds the session id value set")
{
    Setup s;
    SessionState state;
    auto resp = fixtures::response(200, "welcome",
                                   {{"Set-Cookie", "sessionid=abc123; Path=/; HttpOnly"}});
    observe_response(state, "Do Login", resp, s.app().attributes);
    REQUIRE(state.attrs.count("session id"));
    CHECK(state.attrs.at("session id").contains("abc123"));

    SUBCASE("the set rule is scoped to its actions")
    {
        SessionState other;
        observe_response(other, "Login Page", resp, s.app().attributes);
        CHECK_FALSE(other.attrs.count("session id"));
    }
}

TEST_CASE("body regex locator captures the CSRF token")
{
    Setup s;
    SessionState state;
    auto resp = fixtures::response(200, fixtures::token_page("t0k"));
    observe_response(state, "Login Page", resp, s.app().attributes);
    REQUIRE(state.attrs.count("CSRF token"));
    CHECK(state.attrs.at("CSRF token").contains("t0k"));
}

TEST_CASE("responses without the locator leave state unchanged")
{
    Setup s;
    SessionState state;
    auto resp = fixtures::response(200, "nothing to see");
    observe_response(state, "Login Page", resp, s.app().attributes);
    CHECK(state.attrs.empty());
}

TEST_CASE("non-public action without a session cookie is Missing")
{
    Setup s;
    SessionState state;
    ParseTree tree = s.tree(fixtures::get_request("auth.example", "/profile"));
    auto violations =
        check_request(state, s.instance("View Profile"), tree, s.app().attributes,
                      s.app().catalog);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == "attribute_missing");
    CHECK(violations[0].detail.find("session id") != std::string::npos);
}

TEST_CASE("stale attribute value is Invalid, current one passes")
{
    Setup s;
    SessionState state;
    observe_response(state, "Do Login",
                     fixtures::response(200, "", {{"Set-Cookie", "sessionid=live"}}),
                     s.app().attributes);

    ParseTree good = s.tree(fixtures::get_request("auth.example", "/profile",
                                                  {{"Cookie", "sessionid=live"}}));
    CHECK(check_request(state, s.instance("View Profile"), good, s.app().attributes,
                        s.app().catalog)
              .empty());

    ParseTree stale = s.tree(fixtures::get_request("auth.example", "/profile",
                                                   {{"Cookie", "sessionid=dead"}}));
    auto violations = check_request(state, s.instance("View Profile"), stale,
                                    s.app().attributes, s.app().catalog);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == "attribute_invalid");
}

TEST_CASE("public idempotent actions need no attributes")
{
    Setup s;
    SessionState state;
    ParseTree tree = s.tree(fixtures::get_request("auth.example", "/login"));
    CHECK(check_request(state, s.instance("Login Page"), tree, s.app().attributes,
                        s.app().catalog)
              .empty());
}

TEST_CASE("csrf verification applies to non-idempotent actions only")
{
    Setup s;
    SessionState state;
    observe_response(state, "Login Page",
                     fixtures::response(200, fixtures::token_page("tok1")),
                     s.app().attributes);
    observe_response(state, "Do Login",
                     fixtures::response(200, "", {{"Set-Cookie", "sessionid=sid"}}),
                     s.app().attributes);

    ParseTree edit_ok = s.tree(fixtures::post_request(
        "auth.example", "/profile", "csrftoken=tok1&bio=x",
        "application/x-www-form-urlencoded", {{"Cookie", "sessionid=sid"}}));
    CHECK(check_request(state, s.instance("Edit Profile"), edit_ok, s.app().attributes,
                        s.app().catalog)
              .empty());

    ParseTree edit_bad = s.tree(fixtures::post_request(
        "auth.example", "/profile", "csrftoken=zzz",
        "application/x-www-form-urlencoded", {{"Cookie", "sessionid=sid"}}));
    auto violations = check_request(state, s.instance("Edit Profile"), edit_bad,
                                    s.app().attributes, s.app().catalog);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].code == "attribute_invalid");
    CHECK(violations[0].detail.find("CSRF token") != std::string::npos);

    // idempotent view: no token needed
    ParseTree view = s.tree(fixtures::get_request("auth.example", "/profile",
                                                  {{"Cookie", "sessionid=sid"}}));
    CHECK(check_request(state, s.instance("View Profile"), view, s.app().attributes,
                        s.app().catalog)
              .empty());
}

TEST_CASE("invalidation clears value sets per rule scope")
{
    Setup s;
    SessionState state;
    observe_response(state, "Do Login",
                     fixtures::response(200, fixtures::token_page("tok"),
                                        {{"Set-Cookie", "sessionid=sid"}}),
                     s.app().attributes);
    CHECK(state.attrs.at("session id").size() == 1);
    CHECK(state.attrs.at("CSRF token").size() == 1);

    SUBCASE("unrelated action changes nothing")
    {
        CHECK_FALSE(apply_invalidations(state, "View Profile", s.app().attributes));
        CHECK(state.attrs.at("session id").size() == 1);
    }
    SUBCASE("exit clears every attribute but keeps the sets present")
    {
        CHECK(apply_invalidations(state, "Exit", s.app().attributes));
        REQUIRE(state.attrs.count("session id"));
        CHECK(state.attrs.at("session id").size() == 0);
        CHECK(state.attrs.at("CSRF token").size() == 0);
    }
}

TEST_CASE("clears=self empties only the named attribute")
{
    std::vector<AttributeDef> defs(2);
    defs[0].name = "a";
    defs[0].invalidate_rule = InvalidateRule{{"wipe-a"}, false};
    defs[1].name = "b";
    SessionState state;
    state.attrs.try_emplace("a").first->second.add("1");
    state.attrs.try_emplace("b").first->second.add("2");
    CHECK_FALSE(apply_invalidations(state, "wipe-a", defs));
    CHECK(state.attrs.at("a").size() == 0);
    CHECK(state.attrs.at("b").size() == 1);
}

TEST_CASE("check_request never mutates state")
{
    Setup s;
    SessionState state;
    observe_response(state, "Do Login",
                     fixtures::response(200, "", {{"Set-Cookie", "sessionid=sid"}}),
                     s.app().attributes);
    auto snapshot_values = state.attrs.at("session id").values();

    ParseTree tree = s.tree(fixtures::get_request("auth.example", "/profile",
                                                  {{"Cookie", "sessionid=nope"}}));
    check_request(state, s.instance("View Profile"), tree, s.app().attributes,
                  s.app().catalog);
    check_request(state, s.instance("Edit Profile"), tree, s.app().attributes,
                  s.app().catalog);
    CHECK(state.attrs.at("session id").values() == snapshot_values);
    CHECK(state.attrs.size() == 1);
}

TEST_CASE("value sets cap at 64 with FIFO eviction")
{
    ValueSet set;
    for (int i = 0; i < 70; ++i) set.add("v" + std::to_string(i));
    CHECK(set.size() == 64);
    CHECK_FALSE(set.contains("v0"));
    CHECK_FALSE(set.contains("v5"));
    CHECK(set.contains("v6"));
    CHECK(set.contains("v69"));

    SUBCASE("duplicates do not grow the set")
    {
        ValueSet dup;
        dup.add("x");
        dup.add("x");
        CHECK(dup.size() == 1);
    }
}

TEST_CASE("no value enters a set except through observe_response")
{
    // replay a scripted scenario recording every extracted value, then check
    // provenance of everything in the final state
    Setup s;
    SessionState state;
    std::set<std::string> extracted;

    auto observe = [&](const std::string& action, const ResponseRecord& resp) {
        for (const auto& def : s.app().attributes) {
            if (!def.set_rule) continue;
            if (!def.set_rule->any_action && !def.set_rule->on_actions.count(action))
                continue;
            for (const auto& v : def.set_rule->locator.extract(resp))
                extracted.insert(v);
        }
        observe_response(state, action, resp, s.app().attributes);
    };

    observe("Login Page", fixtures::response(200, fixtures::token_page("t1")));
    observe("Do Login", fixtures::response(200, fixtures::token_page("t2"),
                                           {{"Set-Cookie", "sessionid=s1"}}));
    observe("Edit Profile", fixtures::response(200, fixtures::token_page("t3")));

    for (const auto& [name, set] : state.attrs)
        for (const auto& value : set.values())
            CHECK(extracted.count(value) == 1);
}

TEST_CASE("body_json locator resolves dotted addresses with 1-based arrays")
{
    AttributeDef def;
    def.name = "api token";
    SetRule rule;
    rule.locator.kind = ResponseLocator::Kind::body_json;
    rule.locator.address = *NodeAddress::parse("auth.tokens.2");
    rule.any_action = true;
    def.set_rule = rule;

    SessionState state;
    auto resp = fixtures::response(200, R"json({"auth":{"tokens":["a","b","c"]}})json");
    observe_response(state, "whatever", resp, {def});
    REQUIRE(state.attrs.count("api token"));
    CHECK(state.attrs.at("api token").contains("b"));
}

TEST_CASE("session store serializes access per key")
{
    SessionStore store;
    auto one = store.acquire("k1");
    auto two = store.acquire("k1");
    CHECK(one.get() == two.get());
    CHECK(store.acquire("k2").get() != one.get());
    CHECK(store.size() == 2);
}
