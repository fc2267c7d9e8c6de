#include <doctest.h>

#include <set>

#include "cfgloc/error.hpp"
#include "cfgloc/harness/bench.hpp"
#include "cfgloc/harness/generate.hpp"
#include "cfgloc/harness/inject.hpp"
#include "cfgloc/harness/rng.hpp"
#include "cfgloc/harness/score.hpp"
#include "cfgloc/harness/simulate.hpp"
#include "cfgloc/net/parse.hpp"
#include "cfgloc/pipeline.hpp"
#include "fixtures.hpp"

using namespace cfgloc;
using namespace cfgloc::harness;

namespace {

std::string printAll(const net::Network& n) {
    std::string out;
    for (const auto& [name, cfg] : n.routers) out += net::printConfig(cfg);
    return out;
}

std::size_t networkStatements(const net::Network& n) {
    std::size_t c = 0;
    for (const auto& [name, cfg] : n.routers) {
        if (cfg.ospf) c += cfg.ospf->networks.size();
        if (cfg.bgp) c += cfg.bgp->networks.size();
    }
    return c;
}

report::Entry entry(const std::string& key, std::vector<std::string> sites) {
    report::Entry e;
    e.key = key;
    e.sites = std::move(sites);
    return e;
}

report::Report reportOf(std::vector<std::vector<report::Entry>> findings) {
    report::Report r;
    for (auto& f : findings) r.findings.push_back(report::Finding{0, std::move(f), {}, {}});
    return r;
}

}  // namespace

TEST_CASE("rng matches the reference sequence") {
    // Reference values from an independent implementation of splitmix64 and
    // xorshift64*.
    Rng zero(0);
    CHECK(zero.next() == 0x7bbcb40d550682d0ull);
    CHECK(zero.next() == 0xde7fe413d00cc9fdull);
    CHECK(zero.next() == 0xb3c638353c668c91ull);
    Rng r42(42);
    CHECK(r42.next() == 0x31b0ece7c4f697a2ull);
    CHECK(r42.next() == 0x9008a3b1cb686f03ull);
    CHECK(injectionSeeds(7, 3) ==
          std::vector<std::uint64_t>{0x63cbe1e459320dd7ull, 0x044c3cd7f43c661cull, 0xe6984080bab12a02ull});

    Rng r(9);
    std::set<std::uint64_t> seen;
    for (int i = 0; i < 1000; ++i) {
        auto x = r.below(5);
        CHECK(x < 5);
        seen.insert(x);
    }
    CHECK(seen.size() == 5);
}

TEST_CASE("ring generator") {
    Generated g = generateRing(8);
    net::Network n = g.network();
    CHECK(n.routers.size() == 8);
    CHECK(n.topology.links.size() == 8);
    for (const auto& [name, cfg] : n.routers) {
        CHECK(cfg.ospf);
        CHECK_FALSE(cfg.bgp);
    }
    CHECK(net::validate(n).empty());
    auto reqs = g.parsedRequirements(n.topology);
    CHECK(reqs.size() == 56);
    for (const auto& r : reqs) CHECK(r.maxFailures == 1);
    // Every pair stays reachable under every single failure.
    CHECK(simulatedViolations(n, reqs).empty());
    CHECK_THROWS_AS(generateRing(2), Error);
    CHECK_THROWS_AS(generateRing(65), Error);
}

TEST_CASE("tree generator") {
    Generated g = generateTree(3);
    net::Network n = g.network();
    CHECK(n.routers.size() == 7);
    CHECK(n.topology.links.size() == 6);
    CHECK(net::validate(n).empty());
    auto reqs = g.parsedRequirements(n.topology);
    CHECK(reqs.size() == 42);
    CHECK(simulatedViolations(n, reqs).empty());
    CHECK_THROWS_AS(generateTree(1), Error);
    CHECK_THROWS_AS(generate("mesh", 4), Error);
}

TEST_CASE("campus generator mirrors the fixture") {
    net::Network gen = generateCampus().network();
    auto fx = testing::loadFixture("campus");
    REQUIRE(gen.routers.size() == fx.network.routers.size());
    for (const auto& [name, cfg] : fx.network.routers) {
        CAPTURE(name);
        CHECK(net::structurallyEqual(gen.router(name), cfg));
    }
    CHECK(gen.topology.links.size() == fx.network.topology.links.size());
    for (std::size_t i = 0; i < gen.topology.links.size(); ++i) {
        CHECK(gen.topology.links[i].a == fx.network.topology.links[i].a);
        CHECK(gen.topology.links[i].b == fx.network.topology.links[i].b);
    }
    auto reqs = generateCampus().parsedRequirements(gen.topology);
    REQUIRE(reqs.size() == fx.requirements.size());
    for (std::size_t i = 0; i < reqs.size(); ++i) CHECK(reqs[i].id == fx.requirements[i].id);
}

TEST_CASE("generated networks are compliant") {
    for (const auto& g : {generateRing(5), generateTree(2), generateCampus()}) {
        CAPTURE(g.kind);
        net::Network n = g.network();
        auto res = localize(n, g.parsedRequirements(n.topology));
        CHECK(res.report.status() == "compliant");
        CHECK(res.report.complete());
    }
}

TEST_CASE("OmitNw removes one network statement") {
    net::Network base = generateRing(4).network();  // three statements per router
    Injection inj = inject(base, ErrorType::OmitNw, 11);
    CHECK(networkStatements(inj.network) == networkStatements(base) - 1);
    REQUIRE(inj.error.items.size() == 1);
    const auto& item = inj.error.items[0];
    REQUIRE(item.sites.size() == 1);
    CHECK(item.sites[0].find(item.router + "|ospf-iface|") == 0);
    // The recorded span is the removed line in the original file.
    REQUIRE(item.spans.size() == 1);
    const auto& orig = base.router(item.router);
    bool found = false;
    for (const auto& nw : orig.ospf->networks) found = found || nw.span == item.spans[0];
    CHECK(found);
    CHECK(net::validate(inj.network).empty());
}

TEST_CASE("OmitNb removes both ends") {
    SUBCASE("OSPF") {
        net::Network base = generateRing(4).network();
        Injection inj = inject(base, ErrorType::OmitNb, 3);
        CHECK(networkStatements(inj.network) == networkStatements(base) - 2);
        REQUIRE(inj.error.items.size() == 2);
        CHECK(inj.error.items[0].router != inj.error.items[1].router);
    }
    SUBCASE("BGP") {
        net::Network base = generateTree(2).network();
        Injection inj = inject(base, ErrorType::OmitNb, 3);
        REQUIRE(inj.error.items.size() == 2);
        std::size_t before = 0, after = 0;
        for (const auto& [name, cfg] : base.routers) before += cfg.bgp->neighbors.size();
        for (const auto& [name, cfg] : inj.network.routers) after += cfg.bgp->neighbors.size();
        CHECK(after == before - 2);
        const auto& a = inj.error.items[0];
        const auto& b = inj.error.items[1];
        CHECK(a.sites == std::vector<std::string>{a.router + "|bgp-neighbor|" + b.router});
        CHECK(net::validate(inj.network).empty());
    }
    SUBCASE("route filters toward the peer go too") {
        auto fx = testing::loadFixture("pair_filter");
        Injection inj = inject(fx.network, ErrorType::OmitNb, 1);
        CHECK(net::validate(inj.network).empty());
    }
}

TEST_CASE("ACL injections") {
    net::Network campus = generateCampus().network();
    SUBCASE("OmitAcl") {
        Injection inj = inject(campus, ErrorType::OmitAcl, 5);
        REQUIRE(inj.error.items.size() == 1);
        int applied = 0;
        for (const auto& [name, cfg] : inj.network.routers)
            for (const auto& i : cfg.interfaces) applied += i.outAcl.has_value() + i.inAcl.has_value();
        CHECK(applied == 2);
        CHECK(net::validate(inj.network).empty());
        CHECK_THROWS_AS(inject(generateRing(4).network(), ErrorType::OmitAcl, 1), Error);
    }
    SUBCASE("OmitAclRule follows replicas") {
        bool sawReplicated = false;
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            Injection inj = inject(campus, ErrorType::OmitAclRule, seed);
            std::set<std::string> routers;
            for (const auto& item : inj.error.items) routers.insert(item.router);
            if (routers.count("core2")) {
                sawReplicated = true;
                CHECK(routers == std::set<std::string>{"core2", "core3"});
                const auto* a2 = inj.network.router("core2").acl("deptFilter");
                const auto* a3 = inj.network.router("core3").acl("deptFilter");
                REQUIRE(a2->rules.size() == 2);
                REQUIRE(a3->rules.size() == 2);
                for (std::size_t i = 0; i < 2; ++i) CHECK(a2->rules[i].src == a3->rules[i].src);
            } else {
                CHECK(routers == std::set<std::string>{"edge"});
            }
        }
        CHECK(sawReplicated);
        CHECK_THROWS_AS(inject(generateRing(3).network(), ErrorType::OmitAclRule, 1), Error);
    }
    SUBCASE("ExtraAcl") {
        Injection inj = inject(campus, ErrorType::ExtraAcl, 8);
        REQUIRE(inj.error.items.size() == 1);
        const auto& item = inj.error.items[0];
        const auto* acl = inj.network.router(item.router).acl("extra1");
        REQUIRE(acl);
        REQUIRE(acl->rules.size() == 2);
        CHECK(acl->rules[0].action == net::Action::Deny);
        CHECK(acl->rules[1].action == net::Action::Permit);
        CHECK(item.sites.size() == 2);
        CHECK(item.spans.size() == 2);
        CHECK(net::validate(inj.network).empty());
    }
}

TEST_CASE("injection is reproducible") {
    net::Network campus = generateCampus().network();
    for (auto type : {ErrorType::OmitNw, ErrorType::OmitNb, ErrorType::OmitAcl, ErrorType::OmitAclRule,
                      ErrorType::ExtraAcl}) {
        CAPTURE(errorTypeName(type));
        std::set<std::string> outcomes;
        for (std::uint64_t seed = 1; seed <= 12; ++seed) {
            Injection a = inject(campus, type, seed);
            Injection b = inject(campus, type, seed);
            CHECK(printAll(a.network) == printAll(b.network));
            CHECK(a.error.description == b.error.description);
            outcomes.insert(a.error.description);
        }
        CHECK(outcomes.size() > 1);
    }
    CHECK(parseErrorType("OmitAclRule") == ErrorType::OmitAclRule);
    CHECK_FALSE(parseErrorType("ModCost"));
}

TEST_CASE("scoring") {
    InjectedError replicated;
    replicated.items = {{"core2", {"core2|acl|deptFilter"}, {}}, {"core3", {"core3|acl|deptFilter"}, {}}};

    SUBCASE("findings equal ground truth") {
        Score s = score(reportOf({{entry("a", {"core2|acl|deptFilter"})}, {entry("b", {"core3|acl|deptFilter"})}}),
                        {replicated});
        CHECK(s.precision == 1.0);
        CHECK(s.recall == 1.0);
    }
    SUBCASE("one of two replicas") {
        Score s = score(reportOf({{entry("a", {"core2|iface|eth1|acl-out", "core2|acl|deptFilter"})}}), {replicated});
        CHECK(s.precision == 1.0);
        CHECK(s.recall == 0.5);
    }
    SUBCASE("no findings") {
        Score s = score(reportOf({}), {replicated});
        CHECK_FALSE(s.precision);
        CHECK(s.recall == 0.0);
    }
    SUBCASE("extra entries lower precision; repeated entries count once") {
        auto hit = entry("a", {"core2|acl|deptFilter"});
        Score s = score(reportOf({{hit}, {hit, entry("x", {"edge|acl|edgeFilter"})}, {entry("y", {"core1|state"})}}),
                        {replicated});
        CHECK(s.flagged == 3);
        CHECK(*s.precision == doctest::Approx(1.0 / 3));
        CHECK(s.recall == 0.5);
    }
}

TEST_CASE("simulated violations") {
    auto static_acl = testing::loadFixture("static_acl");
    CHECK(simulatedViolations(static_acl.network, static_acl.requirements) == std::vector<std::string>{"S-T"});
    auto ce2 = testing::loadFixture("campus_ce2");
    CHECK(simulatedViolations(ce2.network, ce2.requirements) == std::vector<std::string>{"ext-dept:ext->dept3"});
}

TEST_CASE("end to end trial") {
    BenchOptions opts;
    opts.timeBudgetSeconds = 120;
    Trial t = runTrial(generateTree(2), ErrorType::OmitNb, 1, opts);
    REQUIRE(t.violated);
    CHECK(t.complete);
    CHECK(t.scores.at(report::RankMode::Smallest).recall == 1.0);
    CHECK(t.checks > 0);
}
