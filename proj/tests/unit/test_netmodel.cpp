#include <doctest.h>

#include <filesystem>

#include "cfgloc/error.hpp"
#include "cfgloc/net/parse.hpp"
#include "fixtures.hpp"

using namespace cfgloc;
using namespace cfgloc::net;

namespace {

Prefix pfx(const char* s) { return *Prefix::parse(s); }

const char* kOspfAclTopology = R"({
  "routers": ["r1", "r2", "r3"],
  "links": [["r1.eth1", "r2.eth0"], ["r1.eth2", "r3.eth2"], ["r2.eth1", "r3.eth1"]],
  "subnets": {"S": {"prefix": "10.0.1.0/24", "attach": "r1.eth0"},
              "T": {"prefix": "10.0.3.0/24", "attach": "r3.eth0"}}
})";

}  // namespace

TEST_CASE("prefix parsing and containment") {
    CHECK(pfx("1.0.1.0/24").str() == "1.0.1.0/24");
    CHECK_FALSE(Prefix::parse("1.0.1.1/24"));
    CHECK(Prefix::parse("1.0.1.1/24", false)->str() == "1.0.1.0/24");
    CHECK_FALSE(Prefix::parse("1.0.1.0/33"));
    CHECK_FALSE(Prefix::parse("1.0.256.0/24"));
    CHECK(pfx("1.0.0.0/16").contains(pfx("1.0.1.0/24")));
    CHECK_FALSE(pfx("1.0.1.0/24").contains(pfx("1.0.0.0/16")));
    CHECK(Prefix::any().contains(pfx("8.8.8.0/24")));
}

TEST_CASE("interface with an OSPF cost") {
    RouterConfig c = parseConfig("hostname r1\n!\ninterface eth0\n ip 1.0.1.1/24\n ospf cost 1\n!\n", "r1.cfg");
    REQUIRE(c.interfaces.size() == 1);
    const Interface& i = c.interfaces[0];
    CHECK(i.name == "eth0");
    CHECK(i.prefix == pfx("1.0.1.0/24"));
    CHECK(i.ospfCost == 1);
    CHECK(i.enabled);
    CHECK(i.span == Span{"r1.cfg", 3, 6});
    CHECK(i.costSpan == Span{"r1.cfg", 5, 5});
}

TEST_CASE("ACL definition and application") {
    RouterConfig c = parseConfig(
        "hostname core2\n!\ninterface eth1\n ip 172.16.23.1/30\n ip access-group deptFilter out\n!\n"
        "access-list deptFilter permit src 1.0.2.0/24 dst any\n",
        "core2.cfg");
    const AclDef* a = c.acl("deptFilter");
    REQUIRE(a);
    REQUIRE(a->rules.size() == 1);
    CHECK(a->rules[0].action == Action::Permit);
    CHECK(a->rules[0].src == pfx("1.0.2.0/24"));
    CHECK(a->rules[0].dst.isAny());
    CHECK(a->rules[0].span.firstLine == 7);
    CHECK(c.interfaces[0].outAcl == "deptFilter");
    CHECK_FALSE(c.interfaces[0].inAcl);
    // First match wins, then the implicit deny.
    CHECK(a->permits(pfx("1.0.2.0/24").address + 5, 0x08080808));
    CHECK_FALSE(a->permits(pfx("1.0.1.0/24").address + 5, 0x08080808));
}

TEST_CASE("routing processes and static routes") {
    RouterConfig c = parseConfig(
        "hostname r1\n!\ninterface eth0\n ip 10.0.1.1/24\n ospf passive\n shutdown\n!\n"
        "router ospf\n network 10.0.1.0/24\n!\n"
        "router bgp 65001\n neighbor r2 interface eth0\n network 10.0.1.0/24\n filter out r2 deny 10.0.3.0/24 permit "
        "0.0.0.0/0\n!\n"
        "ip route 10.0.3.0/24 next-hop r2\n",
        "r1.cfg");
    CHECK(c.interfaces[0].ospfPassive);
    CHECK_FALSE(c.interfaces[0].enabled);
    REQUIRE(c.ospf);
    CHECK(c.ospf->covering(pfx("10.0.1.0/24")));
    CHECK_FALSE(c.ospf->covering(pfx("10.0.2.0/24")));
    REQUIRE(c.bgp);
    CHECK(c.bgp->asn == 65001);
    REQUIRE(c.bgp->neighbor("r2"));
    CHECK(c.bgp->neighbor("r2")->peerInterface == "eth0");
    REQUIRE(c.bgp->filters.at("r2").size() == 2);
    CHECK(c.bgp->filters.at("r2")[0].action == Action::Deny);
    REQUIRE(c.staticRoutes.size() == 1);
    CHECK(c.staticRoutes[0].nextHop == "r2");
    CHECK(c.staticRoutes[0].span.firstLine == 16);
}

TEST_CASE("syntax errors carry file, line and column") {
    SUBCASE("unterminated stanza names the opening line") {
        try {
            parseConfig("hostname r1\n!\ninterface eth0\n ip 10.0.1.1/24\n", "r1.cfg");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.file() == "r1.cfg");
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("malformed prefix") {
        try {
            parseConfig("hostname r1\n!\ninterface eth0\n ip 10.0.1/24\n!\n", "r1.cfg");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 4);
            CHECK(e.column() == 5);
        }
    }
    SUBCASE("cost out of range") {
        CHECK_THROWS_AS(parseConfig("hostname r1\n!\ninterface eth0\n ospf cost 0\n!\n", "r1.cfg"), ParseError);
        CHECK_THROWS_AS(parseConfig("hostname r1\n!\ninterface eth0\n ospf cost 65536\n!\n", "r1.cfg"), ParseError);
    }
    SUBCASE("missing hostname") { CHECK_THROWS_AS(parseConfig("interface eth0\n!\n", "x.cfg"), ParseError); }
}

TEST_CASE("duplicate names are semantic errors") {
    CHECK_THROWS_AS(parseConfig("hostname r1\n!\ninterface eth0\n!\ninterface eth0\n!\n", "r1.cfg"), SemanticError);
    CHECK_THROWS_AS(parseConfig("hostname r1\n!\naccess-list A permit src any dst any\n!\n"
                                "access-list A deny src any dst any\n",
                                "r1.cfg"),
                    SemanticError);
}

TEST_CASE("unknown statements warn") {
    RouterConfig c = parseConfig("hostname r1\n!\nservice timestamps\ninterface eth0\n description uplink\n!\n", "r1.cfg");
    REQUIRE(c.warnings.size() == 2);
    CHECK(c.warnings[0].severity == Severity::Warning);
    CHECK(c.warnings[0].span.firstLine == 3);
    CHECK(c.interfaces.size() == 1);
}

TEST_CASE("print and parse round trip on every fixture") {
    for (const auto& entry : std::filesystem::directory_iterator(testing::fixtureDir(""))) {
        auto fx = testing::loadFixture(entry.path().filename().string());
        for (const auto& [name, cfg] : fx.network.routers) {
            CAPTURE(name);
            RouterConfig again = parseConfig(printConfig(cfg), cfg.file);
            CHECK(structurallyEqual(cfg, again));
        }
    }
}

TEST_CASE("topology parsing") {
    Topology t = parseTopology(kOspfAclTopology);
    CHECK(t.routers == std::vector<std::string>{"r1", "r2", "r3"});
    REQUIRE(t.links.size() == 3);
    CHECK(t.links[1].name() == "r1-r3");
    CHECK(t.linkBetween("r3", "r2") == 2);
    CHECK(t.neighbors("r1") == std::vector<std::string>{"r2", "r3"});
    REQUIRE(t.subnet("T"));
    CHECK(t.subnet("T")->attach == Endpoint{"r3", "eth0"});

    Topology single = parseTopology(R"({"routers": ["r1"], "links": []})");
    CHECK(single.routers.size() == 1);
    CHECK(single.links.empty());
}

TEST_CASE("topology errors") {
    CHECK_THROWS_AS(parseTopology(R"({"routers": ["r1"], "links": [["r1.eth0", "r9.eth0"]]})"), SemanticError);
    CHECK_THROWS_AS(parseTopology(R"({"routers": ["r1", "r2"], "links": [["r1.eth0", "r1.eth1"]]})"), SemanticError);
    CHECK_THROWS_AS(parseTopology(R"({"routers": {"r1": ["eth0"], "r2": ["eth0"]}, "links": [["r1.eth0", "r2.eth7"]]})"),
                    SemanticError);
    CHECK_THROWS_AS(parseTopology("{not json"), ParseError);
}

TEST_CASE("validation") {
    SUBCASE("bundled fixtures are clean") {
        for (const char* name : {"campus", "static_acl", "ospf_acl", "ospf_adjacency", "pair_filter"}) {
            CAPTURE(name);
            CHECK(validate(testing::loadFixture(name).network).empty());
        }
    }
    std::string topo = R"({"routers": ["r1", "r2"], "links": [["r1.eth0", "r2.eth0"]]})";
    std::string r2 = "hostname r2\n!\ninterface eth0\n ip 10.0.0.2/30\n!\n";
    SUBCASE("BGP neighbor that is not a router") {
        auto net = buildNetwork({{"r1.cfg", "hostname r1\n!\ninterface eth0\n ip 10.0.0.1/30\n!\n"
                                            "router bgp 1\n neighbor r7 interface eth0\n!\n"},
                                 {"r2.cfg", r2}},
                                topo);
        auto d = validate(net);
        REQUIRE(d.size() == 1);
        CHECK(d[0].severity == Severity::Error);
        CHECK(d[0].span == Span{"r1.cfg", 7, 7});
    }
    SUBCASE("ACL applied but not defined") {
        auto net = buildNetwork({{"r1.cfg", "hostname r1\n!\ninterface eth0\n ip 10.0.0.1/30\n"
                                            " ip access-group missing in\n!\n"},
                                 {"r2.cfg", r2}},
                                topo);
        auto d = validate(net);
        REQUIRE(d.size() == 1);
        CHECK(d[0].span.firstLine == 5);
    }
    SUBCASE("link naming an interface that is not configured") {
        auto net = buildNetwork({{"r1.cfg", "hostname r1\n!\ninterface eth1\n ip 10.0.0.1/30\n!\n"}, {"r2.cfg", r2}},
                                topo);
        CHECK(validate(net).size() == 1);
    }
    SUBCASE("diagnostics are stable") {
        auto net = buildNetwork({{"r1.cfg", "hostname r1\n!\ninterface eth0\n ip access-group a in\n"
                                            " ip access-group b out\n!\n"},
                                 {"r2.cfg", r2}},
                                topo);
        auto d1 = validate(net), d2 = validate(net);
        REQUIRE(d1.size() == 2);
        for (std::size_t i = 0; i < d1.size(); ++i) CHECK(d1[i].str() == d2[i].str());
    }
}
