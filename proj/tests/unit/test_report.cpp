#include <doctest.h>

#include <json.hpp>
#include <sstream>

#include "cfgloc/pipeline.hpp"
#include "cfgloc/report/report.hpp"
#include "fixtures.hpp"

using namespace cfgloc;
using namespace cfgloc::report;
using json = nlohmann::json;

namespace {

Entry present(const std::string& key, const std::string& router, const std::string& file, int line) {
    Entry e;
    e.key = key;
    e.router = router;
    e.kind = "AclUse";
    e.spans = {net::Span{file, line, line}};
    e.sites = {key};
    return e;
}

Entry absent(const std::string& key, const std::string& router) {
    Entry e;
    e.key = key;
    e.router = router;
    e.kind = "OspfAdjacency";
    e.absent = true;
    e.site = router + " router ospf";
    e.suggestion = "network 10.0.0.0/30";
    return e;
}

RequirementResult violated(const std::string& id) {
    RequirementResult r;
    r.id = id;
    r.kind = "reachable";
    r.src = "S";
    r.dst = "T";
    r.violated = true;
    r.scenarios = {ScenarioSummary{0, {}, 1, "S+"}};
    return r;
}

// a: {A}, {B, C}, {D, E, F}, {G, H, I, J}; b: {A}, {K}
std::vector<Mcs> sample() {
    auto A = present("A", "r1", "r1.cfg", 5), B = present("B", "r2", "r2.cfg", 3), C = present("C", "r1", "r1.cfg", 9);
    auto D = present("D", "r3", "r3.cfg", 1), E = present("E", "r3", "r3.cfg", 2), F = absent("F", "r2");
    auto G = present("G", "r4", "r4.cfg", 1), H = present("H", "r4", "r4.cfg", 2), I = present("I", "r4", "r4.cfg", 3);
    auto J = present("J", "r4", "r4.cfg", 4), K = present("K", "r0", "r0.cfg", 7);
    return {{"a", 0, {A}}, {"a", 0, {C, B}}, {"a", 1, {D, E, F}}, {"a", 1, {G, H, I, J}}, {"b", 0, {A}}, {"b", 0, {K}}};
}

std::vector<std::size_t> sizes(const Report& r) {
    std::vector<std::size_t> out;
    for (const auto& f : r.findings) out.push_back(f.size());
    return out;
}

}  // namespace

TEST_CASE("rank modes") {
    std::vector<RequirementResult> reqs{violated("a"), violated("b")};
    auto mcses = sample();

    Report all = aggregate(reqs, mcses, RankMode::All);
    CHECK(sizes(all) == std::vector<std::size_t>{1, 1, 2, 3, 4});
    // Same size: ordered by (router, file, line) of the entries.
    CHECK(all.findings[0].entries[0].key == "K");
    CHECK(all.findings[1].entries[0].key == "A");
    CHECK(all.findings[1].requirements == std::vector<std::string>{"a", "b"});
    CHECK(all.findings[1].scenarios == std::vector<std::string>{"a#0", "b#0"});
    // Entries inside a finding are sorted too.
    CHECK(all.findings[2].entries[0].key == "C");
    for (std::size_t i = 0; i < all.findings.size(); ++i) CHECK(all.findings[i].rank == static_cast<int>(i) + 1);

    CHECK(sizes(aggregate(reqs, mcses, RankMode::Smallest)) == std::vector<std::size_t>{1, 1});
    CHECK(sizes(aggregate(reqs, mcses, RankMode::ThreeSmallest)) == std::vector<std::size_t>{1, 1, 2, 3});

    Report inter = aggregate(reqs, mcses, RankMode::Intersect);
    REQUIRE(inter.findings.size() == 1);
    CHECK(inter.findings[0].entries[0].key == "A");
    CHECK(inter.warnings.empty());
}

TEST_CASE("intersect with one violated requirement falls back to all") {
    auto b = violated("b");
    b.violated = false;
    b.scenarios.clear();
    Report r = aggregate({violated("a"), b}, sample(), RankMode::Intersect);
    CHECK(r.findings.size() == 5);
    CHECK(r.warnings.size() == 1);
}

TEST_CASE("status") {
    Report compliant = aggregate({RequirementResult{"a", "reachable", "S", "T", 0, false, true, {}, ""}}, {},
                                 RankMode::Smallest);
    CHECK(compliant.status() == "compliant");
    CHECK(compliant.findings.empty());
    CHECK(aggregate({violated("a")}, sample(), RankMode::Smallest).status() == "violated");
    auto err = violated("a");
    err.error = "unsupported";
    CHECK(aggregate({err}, {}, RankMode::Smallest).status() == "error");
    auto partial = violated("a");
    partial.complete = false;
    CHECK_FALSE(aggregate({partial}, {}, RankMode::Smallest).complete());
}

TEST_CASE("json schema") {
    Report rep = aggregate({violated("a"), violated("b")}, sample(), RankMode::All);
    std::ostringstream out;
    writeJson(out, rep);
    json j = json::parse(out.str());
    CHECK(j["version"] == 1);
    CHECK(j["status"] == "violated");
    CHECK(j["rankMode"] == "all");
    CHECK(j["complete"] == true);
    REQUIRE(j["requirements"].size() == 2);
    CHECK(j["requirements"][0]["scenarios"][0]["fingerprint"] == "S+");
    REQUIRE(j["findings"].size() == 5);
    const json& f = j["findings"][3];  // {F, D, E}: r2 sorts before r3
    CHECK(f["mcsSize"] == 3);
    CHECK(f["spans"].size() == 2);
    REQUIRE(f["omissions"].size() == 1);
    CHECK(f["omissions"][0]["type"] == "absent");
    CHECK(f["omissions"][0]["suggestion"] == "network 10.0.0.0/30");
    CHECK(f["entries"][1]["spans"][0]["file"] == "r3.cfg");
    CHECK(f["entries"][1]["spans"][0]["firstLine"] == 1);
}

TEST_CASE("text output quotes the source lines") {
    auto fx = testing::loadFixture("static_acl");
    auto res = localize(fx.network, fx.requirements);
    Sources sources{{"r1.cfg",
                     {"hostname r1", "!", "interface eth0", " ip 10.0.1.1/24", "!", "interface eth1", " ip 10.1.12.1/30",
                      " ip access-group blockT out", "!", "ip route 10.0.3.0/24 next-hop r2",
                      "access-list blockT deny src any dst 10.0.3.0/24", "access-list blockT permit src any dst any"}}};
    std::ostringstream out;
    writeText(out, res.report, &sources);
    CHECK(out.str().find("8 |  ip access-group blockT out") != std::string::npos);
    CHECK(out.str().find("status: violated") != std::string::npos);
}
