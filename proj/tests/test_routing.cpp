// Copyright 2026 The wafmodel Authors
// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <random>

#include "core/model.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/routing_oracle.hpp"

using namespace waf;

namespace {

const AppModel& news_app()
{
    static ModelSet model = load_model(fixtures::news_model());
    return model.apps[0];
}

ParseTree news_tree(const std::string& path)
{
    auto env = parse_envelope(fixtures::get_request("news.example", path));
    return run_decision_tree(env, news_app().decode_tree, DecoderRegistry::built_in()).tree;
}

} // namespace

TEST_CASE("the archive decision list routes the three table rows")
{
    RouteOutcome out = route(news_tree("/articles/2005/03/12/"), news_app().routing,
                             news_app().catalog);
    REQUIRE(out.instance.has_value());
    CHECK(out.instance->action == "View News");
    CHECK(out.instance->actuals.at("YEAR") == "2005");
    CHECK(out.instance->actuals.at("MONTH") == "03");
    CHECK(out.instance->actuals.at("ARTICLE_ID") == "12");
    CHECK(out.instance->rule_index == 0);

    out = route(news_tree("/articles/2005/03/"), news_app().routing, news_app().catalog);
    REQUIRE(out.instance.has_value());
    CHECK(out.instance->action == "Past Month Archive");
    CHECK(out.instance->actuals ==
          std::map<std::string, Bytes>{{"MONTH", "03"}, {"YEAR", "2005"}});

    out = route(news_tree("/articles/2005/"), news_app().routing, news_app().catalog);
    REQUIRE(out.instance.has_value());
    CHECK(out.instance->action == "Past Year Archive");
    CHECK(out.instance->actuals == std::map<std::string, Bytes>{{"YEAR", "2005"}});
}

TEST_CASE("paths outside the table produce NoRoute")
{
    for (const char* path : {"/articles/20x5/", "/other/", "/articles/2005/03/12/x/"}) {
        RouteOutcome out = route(news_tree(path), news_app().routing, news_app().catalog);
        INFO("path " << path);
        CHECK_FALSE(out.instance.has_value());
    }
}

TEST_CASE("binding failure on a matched rule falls through to later rules")
{
    // first rule matches everything but binds a missing node for a required param
    ActionCatalog catalog({{"broken", true, true, {{"P", {"", true}}}},
                           {"fallback", true, true, {}}});
    RoutingTable table;
    table.rules.push_back(
        {Predicate::parse("exists(request.method)"), "broken",
         {{"P", *NodeAddress::parse("url.nothing")}}});
    table.rules.push_back({Predicate::parse("exists(request.method)"), "fallback", {}});

    ParseTree tree = bootstrap_tree(parse_envelope("GET / HTTP/1.1\r\nHost: a\r\n\r\n"));
    RouteOutcome out = route(tree, table, catalog);
    REQUIRE(out.instance.has_value());
    CHECK(out.instance->action == "fallback");
    REQUIRE(out.violations.size() == 1);
    CHECK(out.violations[0].code == "rule_binding_failure");

    SUBCASE("optional params may be absent without failing the rule")
    {
        ActionCatalog cat2({{"loose", true, true, {{"P", {"", false}}}}});
        RoutingTable t2;
        t2.rules.push_back({Predicate::parse("exists(request.method)"), "loose",
                            {{"P", *NodeAddress::parse("url.nothing")}}});
        RouteOutcome o2 = route(tree, t2, cat2);
        REQUIRE(o2.instance.has_value());
        CHECK(o2.instance->actuals.empty());
        CHECK(o2.violations.empty());
    }
}

TEST_CASE("validate_table reports unknown actions and undeclared params")
{
    CHECK(validate_table(news_app().routing, news_app().catalog).empty());

    RoutingTable bad;
    bad.rules.push_back({Predicate::parse(""), "No Such Action", {}});
    auto defects = validate_table(bad, news_app().catalog);
    REQUIRE(defects.size() == 1);
    CHECK(defects[0].find("unknown action") != std::string::npos);

    RoutingTable undeclared;
    undeclared.rules.push_back({Predicate::parse(""), "Home",
                                {{"NOPE", *NodeAddress::parse("url.raw")}}});
    defects = validate_table(undeclared, news_app().catalog);
    REQUIRE(defects.size() == 1);
    CHECK(defects[0].find("not declared") != std::string::npos);
}

TEST_CASE("explain shows per-rule outcomes and stops after the match")
{
    std::string trace = explain_route(news_tree("/articles/2005/03/12/"),
                                      news_app().routing, news_app().catalog);
    CHECK(trace.find("rule 1 [View News]: MATCH") != std::string::npos);
    // rules after the first full match are never inspected
    CHECK(trace.find("rule 2") == std::string::npos);

    trace = explain_route(news_tree("/other/"), news_app().routing, news_app().catalog);
    CHECK(trace.find("rule 1") != std::string::npos);
    CHECK(trace.find("rule 4") != std::string::npos);
    CHECK(trace.find("first failing atom: url.path.1 = articles") != std::string::npos);
    CHECK(trace.find("-> no route") != std::string::npos);

    RoutingTable empty;
    CHECK(explain_route(news_tree("/"), empty, news_app().catalog) == "no rules\n");
}

// ---- randomized equivalence with the brute-force first-match oracle ----

TEST_CASE("route equals the brute-force first-match oracle on random instances")
{
    std::mt19937 rng(42);
    for (int i = 0; i < 500; ++i) {
        auto setup = test_oracle::random_routing_instance(rng, 20);
        auto expected = test_oracle::oracle_route(setup);
        RouteOutcome actual = route(setup.tree, setup.table, setup.catalog);
        if (expected) {
            REQUIRE(actual.instance.has_value());
            CHECK(actual.instance->rule_index == expected->first);
            CHECK(std::map<std::string, std::string>(actual.instance->actuals.begin(),
                                                     actual.instance->actuals.end()) ==
                  expected->second);
        } else {
            CHECK_FALSE(actual.instance.has_value());
        }
    }
}

TEST_CASE("reordering rules with disjoint predicates never changes the outcome")
{
    std::mt19937 rng(43);
    size_t swapped_pairs = 0;
    for (int i = 0; i < 200 || swapped_pairs < 50; ++i) {
        if (i > 2000) break;
        auto setup = test_oracle::random_routing_instance(rng, 6);
        // find a disjoint adjacent pair: at most one of the two matches
        for (size_t r = 0; r + 1 < setup.table.rules.size(); ++r) {
            bool first = setup.table.rules[r].predicate.eval(setup.tree);
            bool second = setup.table.rules[r + 1].predicate.eval(setup.tree);
            if (first && second) continue;
            RouteOutcome before = route(setup.tree, setup.table, setup.catalog);
            std::swap(setup.table.rules[r], setup.table.rules[r + 1]);
            RouteOutcome after = route(setup.tree, setup.table, setup.catalog);
            std::swap(setup.table.rules[r], setup.table.rules[r + 1]);
            CHECK(before.instance.has_value() == after.instance.has_value());
            if (before.instance && after.instance) {
                CHECK(before.instance->action == after.instance->action);
                CHECK(before.instance->actuals == after.instance->actuals);
            }
            ++swapped_pairs;
        }
    }
    CHECK(swapped_pairs >= 50);
}
