#include <doctest.h>

#include <random>
#include <sstream>

#include "cfgloc/error.hpp"
#include "cfgloc/smt/system.hpp"
#include "random_formula.hpp"

using namespace cfgloc;
using namespace cfgloc::smt;

TEST_CASE("labeled constraints toggle through assumptions") {
    System s;
    auto& tm = s.terms();
    Term x = tm.boolVar("x");
    SUBCASE("x and not x under one label") {
        s.assertLabeled(tm.mkAnd({x, tm.mkNot(x)}), Label{1, Category::Logic, "c1"});
        CHECK(s.check({1}).status == CheckStatus::Unsat);
    }
    SUBCASE("conflicting labels") {
        s.assertLabeled(x, Label{1, Category::Logic, "c1"});
        s.assertLabeled(tm.mkNot(x), Label{2, Category::Logic, "c2"});
        auto r = s.check({1});
        REQUIRE(r.status == CheckStatus::Sat);
        CHECK(r.model.boolean(x));
        auto u = s.check({1, 2});
        REQUIRE(u.status == CheckStatus::Unsat);
        CHECK(u.core == std::vector<LabelId>{1, 2});
        CHECK(s.check({}).status == CheckStatus::Sat);
        CHECK(s.checkCount() == 3);
    }
    SUBCASE("duplicate ids are rejected") {
        s.assertLabeled(x, Label{4, Category::Logic, "a"});
        CHECK_THROWS_AS(s.assertLabeled(x, Label{4, Category::Config, "b"}), InternalError);
    }
}

TEST_CASE("fresh system has no checks") {
    System s;
    CHECK(s.checkCount() == 0);
}

TEST_CASE("timeout still counts as a check") {
    System s;
    auto& tm = s.terms();
    // pigeonhole 8 into 7, hard enough to exceed a tiny budget
    const int P = 8, H = 7;
    std::vector<std::vector<Term>> x(P, std::vector<Term>(H));
    for (auto& row : x)
        for (auto& v : row) v = tm.boolVar("p");
    std::vector<Term> parts;
    for (int p = 0; p < P; ++p) parts.push_back(tm.mkOr(x[p]));
    for (int h = 0; h < H; ++h)
        for (int p = 0; p < P; ++p)
            for (int q = p + 1; q < P; ++q) parts.push_back(tm.mkNot(tm.mkAnd({x[p][h], x[q][h]})));
    LabelId id = s.add(tm.mkAnd(parts), Category::Logic, "php");
    s.setConflictBudget(20);
    CHECK(s.check({id}).status == CheckStatus::Timeout);
    CHECK(s.checkCount() == 1);
    CHECK_THROWS_AS(s.satisfiable(std::vector<LabelId>{id}), SolverTimeout);
}

TEST_CASE("static-route example") {
    // reach/fwd/connected/static/allow symbols of the three-router example
    System s;
    auto& tm = s.terms();
    Term reachS = tm.boolVar("reach_S"), reach1 = tm.boolVar("reach_r1"), reach2 = tm.boolVar("reach_r2");
    Term fwd1T = tm.boolVar("fwd_r1_T"), fwd12 = tm.boolVar("fwd_r1_r2");
    Term conn1 = tm.boolVar("connected_r1"), conn3 = tm.boolVar("connected_r3");
    Term allow1T = tm.boolVar("allow_r1_T"), allow12 = tm.boolVar("allow_r1_r2");
    Term static12 = tm.boolVar("static_r1_r2"), static23 = tm.boolVar("static_r2_r3");
    std::vector<LabelId> ids = {
        s.add(reachS, Category::Requirement, "1"),
        s.add(tm.mkIff(reachS, reach1), Category::Logic, "2"),
        s.add(tm.mkIff(reach1, tm.mkOr({fwd1T, tm.mkAnd({fwd12, reach2})})), Category::Logic, "3"),
        s.add(tm.mkIff(fwd1T, tm.mkAnd({conn1, allow1T})), Category::Logic, "4"),
        s.add(tm.mkIff(fwd12, tm.mkAnd({tm.mkNot(conn1), static12, allow12})), Category::Logic, "5"),
        s.add(static12, Category::Config, "6"),
        s.add(static23, Category::Config, "7"),
        s.add(conn3, Category::Config, "8"),
        s.add(tm.mkNot(allow12), Category::Config, "9"),
    };
    // The nine lines alone leave connected_r1 free; the full encoding binds
    // every absent connected route to false.
    LabelId closed = s.add(tm.mkNot(conn1), Category::Config, "no connected T at r1");
    CHECK(s.check(ids).status == CheckStatus::Sat);
    ids.push_back(closed);
    CHECK(s.check(ids).status == CheckStatus::Unsat);
    auto without9 = ids;
    without9.erase(without9.end() - 2);
    CHECK(s.check(without9).status == CheckStatus::Sat);
    auto core = s.check(ids).core;
    CHECK(s.check(core).status == CheckStatus::Unsat);
}

TEST_CASE("lowering constants and comparisons") {
    TermManager tm;
    auto low = lowerToCnf(tm, tm.boolConst(true));
    // only the clause pinning the constant-true literal
    CHECK(low.cnf.clauses.size() == 1);
    CHECK(low.root.var() == 0);

    // build through a variable so the comparison is not folded away
    Term x = tm.intVar("x", 4);
    Term two = tm.intConst(2, 4), three = tm.intConst(3, 4);
    Term lt = tm.mkUlt(two, three);
    CHECK(tm.isTrue(lt));
    auto cmp = lowerToCnf(tm, tm.mkAnd({tm.mkEq(x, two), tm.mkUlt(x, three)}));
    cmp.cnf.clauses.push_back({cmp.root});
    CHECK(solveCnf(cmp.cnf).status == sat::Status::Sat);
}

TEST_CASE("equality against a constant, all 16 values") {
    TermManager tm;
    Term x = tm.intVar("x", 4);
    auto low = lowerToCnf(tm, tm.mkEq(x, tm.intConst(5, 4)));
    // bits of x are the first four variables allocated after the constant
    std::vector<sat::Lit> bits;
    for (int i = 0; i < 4; ++i) bits.push_back(sat::Lit::make(1 + i));
    for (unsigned v = 0; v < 16; ++v) {
        std::vector<sat::Lit> assume{low.root};
        for (unsigned i = 0; i < 4; ++i) assume.push_back(((v >> i) & 1) ? bits[i] : ~bits[i]);
        auto r = solveCnf(low.cnf, assume);
        CHECK((r.status == sat::Status::Sat) == (v == 5));
    }
}

TEST_CASE("bit-vector operations agree with evaluation") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 40; ++round) {
        System s;
        auto& tm = s.terms();
        const unsigned w = 4;
        Term a = tm.intVar("a", w), b = tm.intVar("b", w);
        Term c = tm.intConst(rng() % 16, w);
        Term p = tm.boolVar("p");
        Term sum = tm.mkAdd(tm.mkIte(p, a, c), b);
        Term f;
        switch (round % 4) {
            case 0: f = tm.mkUlt(sum, tm.mkAddConst(a, rng() % 4)); break;
            case 1: f = tm.mkUle(tm.mkAddConst(b, 3), sum); break;
            case 2: f = tm.mkEq(sum, tm.intConst(rng() % 16, w)); break;
            default: f = tm.mkAnd({tm.mkUlt(a, b), tm.mkNot(tm.mkEq(sum, c))}); break;
        }
        LabelId fid = s.add(f, Category::Logic, "f");
        // pin every input through labels and compare with direct evaluation
        for (unsigned av = 0; av < 16; av += 3) {
            for (unsigned bv = 0; bv < 16; bv += 5) {
                for (int pv = 0; pv < 2; ++pv) {
                    std::vector<LabelId> ids{fid};
                    ids.push_back(s.add(tm.mkEq(a, tm.intConst(av, w)), Category::Logic, "a"));
                    ids.push_back(s.add(tm.mkEq(b, tm.intConst(bv, w)), Category::Logic, "b"));
                    ids.push_back(s.add(pv ? p : tm.mkNot(p), Category::Logic, "p"));
                    Model m;
                    m.set(a, av);
                    m.set(b, bv);
                    m.set(p, pv);
                    bool expected = tm.evaluateBool(f, m);
                    auto r = s.check(ids);
                    CHECK((r.status == CheckStatus::Sat) == expected);
                    if (r.status == CheckStatus::Sat) {
                        CHECK(r.model.get(a) == av);
                        CHECK(r.model.get(b) == bv);
                    }
                }
            }
        }
    }
}

TEST_CASE("random formulas agree with truth tables") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 300; ++round) {
        System s;
        auto& tm = s.terms();
        int n = 3 + static_cast<int>(rng() % 10);
        std::vector<Term> vars;
        for (int i = 0; i < n; ++i) vars.push_back(tm.boolVar("v" + std::to_string(i)));
        std::vector<Term> fs;
        std::vector<LabelId> ids;
        for (int k = 0; k < 3; ++k) {
            fs.push_back(testing::randomFormula(tm, vars, rng, 4));
            ids.push_back(s.add(fs.back(), Category::Logic, "f"));
        }
        auto table = testing::truthTable(tm, vars, fs);
        bool expected = std::find(table.begin(), table.end(), true) != table.end();
        auto r = s.check(ids);
        REQUIRE(r.status != CheckStatus::Timeout);
        CHECK((r.status == CheckStatus::Sat) == expected);
        if (r.status == CheckStatus::Sat) {
            for (auto f : fs) CHECK(tm.evaluateBool(f, r.model));
        } else {
            CHECK(s.check(r.core).status == CheckStatus::Unsat);
            // monotone in the assumption set
            auto more = ids;
            more.push_back(s.add(vars[0], Category::Logic, "extra"));
            CHECK(s.check(more).status == CheckStatus::Unsat);
        }
    }
}

TEST_CASE("dimacs and text dumps") {
    System s(true);
    auto& tm = s.terms();
    Term x = tm.boolVar("x"), y = tm.boolVar("y");
    s.add(tm.mkOr({x, y}), Category::Config, "r1.cfg:3");
    std::ostringstream d, t;
    s.writeDimacs(d);
    s.writeText(t);
    CHECK(d.str().find("p cnf") != std::string::npos);
    CHECK(t.str().find("r1.cfg:3") != std::string::npos);
    CHECK(t.str().find("(or x y)") != std::string::npos);
    System plain;
    CHECK_THROWS_AS(plain.writeDimacs(d), InternalError);
}
