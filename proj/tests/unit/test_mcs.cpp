#include <doctest.h>

#include <random>

#include "cfgloc/error.hpp"
#include "mcs_oracle.hpp"

using namespace cfgloc;
using cfgloc::testing::bruteForce;
using cfgloc::testing::randomProblem;

TEST_CASE("single-MCS growth returns a certified correction set") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 40; ++trial) {
        auto rp = randomProblem(rng, 6, 8, 2);
        auto bf = bruteForce(rp);
        auto lin = mcs::growMssLinear(rp.problem);
        auto bis = mcs::growMssBisect(rp.problem);
        CHECK(bf.mcses.count(lin) == 1);
        CHECK(bf.mcses.count(bis) == 1);
        CHECK(mcs::verifyMcs(rp.problem, lin));
        CHECK(mcs::verifyMcs(rp.problem, bis));
    }
}

TEST_CASE("growth on a satisfiable system reports nothing to correct") {
    smt::System sys;
    auto& tm = sys.terms();
    auto x = tm.boolVar("x");
    mcs::Problem p{&sys, {}, {sys.add(x, smt::Category::Config, "x")}};
    CHECK_THROWS_WITH_AS(mcs::growMssLinear(p), doctest::Contains("nothing to correct"), Error);
    CHECK_THROWS_AS(mcs::growMssBisect(p), Error);
    auto e = mcs::enumerateMcses(p);
    CHECK(e.complete);
    CHECK(e.mcses.empty());
}

TEST_CASE("verifyMcs rejects non-minimal and empty candidates") {
    std::mt19937_64 rng(5);
    auto rp = randomProblem(rng, 6, 8, 2);
    auto m = mcs::growMssBisect(rp.problem);
    CHECK(mcs::verifyMcs(rp.problem, m));
    CHECK_FALSE(mcs::verifyMcs(rp.problem, {}));
    for (auto extra : rp.problem.soft) {
        if (std::find(m.begin(), m.end(), extra) != m.end()) continue;
        auto bigger = m;
        bigger.push_back(extra);
        CHECK_FALSE(mcs::verifyMcs(rp.problem, bigger));
        break;
    }
}

TEST_CASE("shrink returns a minimal unsatisfiable subset") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        auto rp = randomProblem(rng, 6, 9, 2);
        auto bf = bruteForce(rp);
        auto mus = mcs::shrinkMus(rp.problem, rp.problem.soft);
        CHECK(bf.muses.count(mus) == 1);
        // Already minimal input comes back unchanged.
        CHECK(mcs::shrinkMus(rp.problem, mus) == mus);
    }
}

TEST_CASE("enumeration equals exhaustive subset search") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        auto rp = randomProblem(rng, 7, 10, 2);
        auto bf = bruteForce(rp);
        for (bool maximal : {true, false}) {
            mcs::EnumerateOptions opts;
            opts.maximalSeeds = maximal;
            auto e = mcs::enumerateMcses(rp.problem, opts);
            CHECK(e.complete);
            std::set<std::vector<smt::LabelId>> got(e.mcses.begin(), e.mcses.end());
            CHECK(got.size() == e.mcses.size());
            CHECK(got == bf.mcses);
            for (const auto& m : e.mcses)
                for (const auto& u : bf.muses) CHECK(testing::intersects(m, u));
        }
    }
}

TEST_CASE("bisection needs far fewer checks than linear growth for a single culprit") {
    for (std::size_t n : {64u, 128u}) {
        mcs::Problem p;
        auto sys = testing::singletonCulprit(n, n / 3, p);
        auto before = sys->checkCount();
        auto lin = mcs::growMssLinear(p);
        auto linChecks = sys->checkCount() - before;
        before = sys->checkCount();
        auto bis = mcs::growMssBisect(p);
        auto bisChecks = sys->checkCount() - before;
        CHECK(lin == bis);
        CHECK(lin.size() == 1);
        CHECK(linChecks >= n);
        CHECK(bisChecks * 4 <= linChecks);
        if (n == 64) CHECK(bisChecks <= 15);
    }
}

TEST_CASE("exhausted time budget marks the enumeration incomplete") {
    std::mt19937_64 rng(3);
    auto rp = randomProblem(rng, 7, 10, 2);
    mcs::EnumerateOptions opts;
    opts.timeBudgetSeconds = 0;
    auto e = mcs::enumerateMcses(rp.problem, opts);
    CHECK_FALSE(e.complete);
}
