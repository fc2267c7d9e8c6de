#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "cfgloc/enc/encoder.hpp"
#include "fixtures.hpp"

using namespace cfgloc;
using cfgloc::testing::loadFixture;

namespace {

std::vector<smt::LabelId> everything(const enc::ConstraintSystem& cs) {
    auto all = cs.hardLabels();
    all.insert(all.end(), cs.config.begin(), cs.config.end());
    return all;
}

std::vector<smt::LabelId> without(std::vector<smt::LabelId> labels, smt::LabelId drop) {
    labels.erase(std::remove(labels.begin(), labels.end(), drop), labels.end());
    return labels;
}

std::size_t countKind(const enc::ConstraintSystem& cs, enc::VarKind k) {
    return std::count_if(cs.configVars.begin(), cs.configVars.end(), [&](auto& v) { return v.kind == k; });
}

}  // namespace

TEST_CASE("static route line with blocking ACL is unsatisfiable until the ACL binding is dropped") {
    auto fx = loadFixture("static_acl");
    auto cs = enc::encode(fx.network, fx.requirements.at(0));
    CHECK(enc::auditSeparation(cs).empty());
    CHECK_FALSE(cs.system->satisfiable(everything(cs)));

    const auto* acl = cs.var("AclUse:r1:eth1:out");
    REQUIRE(acl != nullptr);
    CHECK_FALSE(acl->absent);
    CHECK(cs.system->satisfiable(without(everything(cs), acl->binding)));

    // Present bindings for both static routes and the connected destination.
    REQUIRE(cs.var("StaticRoute:r1:r2"));
    CHECK_FALSE(cs.var("StaticRoute:r1:r2")->absent);
    CHECK_FALSE(cs.var("StaticRoute:r2:r3")->absent);
    CHECK(cs.var("StaticRoute:r2:r1")->absent);
    CHECK(cs.var("L3Adjacency:r3:eth0"));
}

TEST_CASE("no ACLs anywhere means no AclUse variables") {
    auto fx = loadFixture("pair");
    auto cs = enc::encode(fx.network, fx.requirements.at(0));
    CHECK(countKind(cs, enc::VarKind::AclUse) == 0);
    CHECK(countKind(cs, enc::VarKind::RouteFilter) == 0);
    CHECK(countKind(cs, enc::VarKind::StaticRoute) == 0);
    CHECK(countKind(cs, enc::VarKind::OspfCost) == 0);
    CHECK(cs.system->satisfiable(everything(cs)));
    CHECK(enc::auditSeparation(cs).empty());
}

TEST_CASE("ACLs anywhere put AclUse variables on every interface, bound true where none is applied") {
    auto fx = loadFixture("campus");
    auto cs = enc::encode(fx.network, fx.requirement("ext-dept:ext->dept1"));
    const auto* v = cs.var("AclUse:core2:eth0:in");
    REQUIRE(v != nullptr);
    CHECK(v->absent);
    CHECK(cs.system->terms().toString(cs.system->formula(v->binding)).find("true") != std::string::npos);
    CHECK(enc::auditSeparation(cs).empty());
}

TEST_CASE("same-router subnets are trivially reachable") {
    auto fx = loadFixture("single");
    auto cs = enc::encode(fx.network, fx.requirements.at(0));
    CHECK(cs.system->satisfiable(everything(cs)));
    auto neg = everything(cs);
    neg = without(neg, cs.requirementLabel);
    neg.push_back(cs.negatedRequirement);
    CHECK_FALSE(cs.system->satisfiable(neg));
}

TEST_CASE("unconfigured OSPF adjacency appears as an absent variable bound false") {
    auto fx = loadFixture("ospf_adjacency");
    auto cs = enc::encode(fx.network, fx.requirements.at(0));
    const auto* v = cs.var("OspfAdjacency:r1:r1-r2");
    REQUIRE(v != nullptr);
    CHECK(v->absent);
    CHECK_FALSE(v->suggestion.empty());
    CHECK(cs.var("OspfAdjacency:r1:r1-r3")->absent == false);
}

TEST_CASE("BGP filter denying the destination invalidates the export") {
    auto fx = loadFixture("pair_filter");
    auto cs = enc::encode(fx.network, fx.requirement("A-B"));
    CHECK_FALSE(cs.system->satisfiable(everything(cs)));
    const auto* f = cs.var("RouteFilter:r2:r1");
    REQUIRE(f != nullptr);
    CHECK(cs.system->satisfiable(without(everything(cs), f->binding)));
    auto other = enc::encode(fx.network, fx.requirement("B-A"));
    CHECK(other.system->satisfiable(everything(other)));
}

TEST_CASE("failure budget zero forces every link up") {
    auto fx = loadFixture("ospf_acl");
    auto req = fx.requirements.at(0);
    enc::EncodeOptions opts;
    opts.maxFailuresOverride = 0;
    auto cs = enc::encode(fx.network, req, opts);
    auto r = cs.system->check(everything(cs));
    REQUIRE(r.status == smt::CheckStatus::Sat);
    for (auto v : cs.failVars) CHECK_FALSE(r.model.boolean(v));
}

TEST_CASE("constraint dump lists one labeled constraint per line") {
    auto fx = loadFixture("static_acl");
    auto cs = enc::encode(fx.network, fx.requirements.at(0));
    std::ostringstream out;
    cs.dump(out);
    auto text = out.str();
    CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == cs.system->allLabels().size());
    CHECK(text.find("AclUse:r1:eth1:out") != std::string::npos);
}
