#include <doctest.h>

#include "cfgloc/enc/encoder.hpp"
#include "cfgloc/error.hpp"
#include "cfgloc/net/parse.hpp"
#include "fixtures.hpp"

using namespace cfgloc;

TEST_CASE("single requirements") {
    auto static_acl = testing::loadFixture("static_acl");
    auto r = req::parseRequirements(R"([{"id": "st", "kind": "reachable", "src": "S", "dst": "T", "maxFailures": 0}])",
                                    static_acl.network.topology);
    REQUIRE(r.size() == 1);
    CHECK(r[0].id == "st");
    CHECK(r[0].kind == req::Kind::Reachable);
    CHECK(r[0].src == "S");
    CHECK(r[0].dst == "T");
    CHECK(r[0].maxFailures == 0);
    auto tc = req::trafficClass(r[0], static_acl.network.topology);
    CHECK(tc.src.str() == "10.0.1.0/24");
    CHECK(tc.dst.str() == "10.0.3.0/24");

    auto ospf_acl = testing::loadFixture("ospf_acl");
    auto r1 = req::parseRequirements(R"([{"id": "st", "kind": "reachable", "src": "S", "dst": "T", "maxFailures": 1}])",
                                     ospf_acl.network.topology);
    REQUIRE(r1.size() == 1);
    CHECK(r1[0].maxFailures == 1);
}

TEST_CASE("lists expand to ordered pairs") {
    auto campus = testing::loadFixture("campus");
    auto r = req::parseRequirements(
        R"([{"id": "d", "kind": "reachable", "src": ["dept1", "dept2"], "dst": ["dept1", "dept2", "dept3"]}])",
        campus.network.topology);
    REQUIRE(r.size() == 4);
    CHECK(r[0].id == "d:dept1->dept2");
    CHECK(r[3].id == "d:dept2->dept3");
}

TEST_CASE("requirement errors") {
    auto topo = testing::loadFixture("ospf_acl").network.topology;
    auto bad = [&](const char* doc) { return req::parseRequirements(doc, topo); };
    CHECK_THROWS_AS(bad(R"([{"id": "x", "kind": "reachable", "src": "S", "dst": "X"}])"), SemanticError);
    CHECK_THROWS_AS(bad(R"([{"id": "x", "kind": "reachable", "src": "S", "dst": "T", "maxFailures": 4}])"),
                    SemanticError);
    CHECK_THROWS_AS(bad(R"([{"id": "x", "kind": "reachable", "src": "S", "dst": "S"}])"), SemanticError);
    CHECK_THROWS_AS(bad(R"([{"id": "x", "kind": "maybe", "src": "S", "dst": "T"}])"), SemanticError);
    CHECK_THROWS_AS(bad(R"([{"id": "x", "kind": "reachable", "src": "S", "dst": "T"},
                            {"id": "x", "kind": "blocked", "src": "T", "dst": "S"}])"),
                    SemanticError);
    CHECK_THROWS_AS(bad("[{"), ParseError);
    CHECK(bad(R"([{"id": "x", "kind": "reachable", "src": "S", "dst": "T", "maxFailures": 3}])").size() == 1);
}

TEST_CASE("blocked is the negation of reachable") {
    // Same traffic and budget: the two R constraints must be complementary
    // in every model of the rest of the system.
    auto fx = testing::loadFixture("ospf_acl");
    req::Requirement reach{"r", req::Kind::Reachable, "S", "T", 1};
    req::Requirement block{"b", req::Kind::Blocked, "S", "T", 1};
    auto a = enc::encode(fx.network, reach);
    auto b = enc::encode(fx.network, block);
    auto& sa = *a.system;
    auto& sb = *b.system;
    // Neither requirement alone is contradictory with the logic.
    auto la = a.logic;
    la.push_back(a.requirementLabel);
    auto lb = b.logic;
    lb.push_back(b.requirementLabel);
    CHECK(sa.check(la).status == smt::CheckStatus::Sat);
    CHECK(sb.check(lb).status == smt::CheckStatus::Sat);
    // Each requirement's R is the other's negated toggle.
    CHECK(sa.terms().toString(sa.formula(a.requirementLabel)) == sb.terms().toString(sb.formula(b.negatedRequirement)));
    CHECK(sa.terms().toString(sa.formula(a.negatedRequirement)) == sb.terms().toString(sb.formula(b.requirementLabel)));
}
