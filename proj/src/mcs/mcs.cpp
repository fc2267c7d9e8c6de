#include "cfgloc/mcs/mcs.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <unordered_map>

#include "cfgloc/error.hpp"
#include "cfgloc/sat/cdcl.hpp"

namespace cfgloc::mcs {

namespace {

std::vector<LabelId> join(const std::vector<LabelId>& a, const std::vector<LabelId>& b) {
    std::vector<LabelId> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

smt::CheckResult run(Problem& p, const std::vector<LabelId>& enabled) {
    auto r = p.system->check(join(p.hard, enabled));
    if (r.status == smt::CheckStatus::Timeout) throw SolverTimeout("correction search ran out of solver budget");
    return r;
}

bool sat(Problem& p, const std::vector<LabelId>& enabled) { return run(p, enabled).status == smt::CheckStatus::Sat; }

// Extends the satisfiable set `base` to a maximal one and returns the soft
// labels left out.
std::vector<LabelId> growFrom(Problem& p, std::vector<LabelId> base, MssStrategy strategy) {
    std::set<LabelId> inBase(base.begin(), base.end());
    std::vector<LabelId> rest;
    for (LabelId c : p.soft)
        if (!inBase.count(c)) rest.push_back(c);
    std::vector<LabelId> mcs;

    if (strategy == MssStrategy::Linear) {
        for (LabelId c : rest) {
            base.push_back(c);
            if (!sat(p, base)) {
                base.pop_back();
                mcs.push_back(c);
            }
        }
    } else {
        // A group that is jointly satisfiable with everything kept so far is
        // kept whole; an unsatisfiable group is halved until single culprits
        // remain.
        auto rec = [&](auto& self, std::vector<LabelId> group, bool knownUnsat) -> bool {
            if (group.empty()) return true;
            if (!knownUnsat) {
                auto trial = join(base, group);
                if (sat(p, trial)) {
                    base = std::move(trial);
                    return true;
                }
            }
            if (group.size() == 1) {
                mcs.push_back(group[0]);
                return false;
            }
            auto mid = group.begin() + static_cast<std::ptrdiff_t>(group.size() / 2);
            std::vector<LabelId> a(group.begin(), mid), b(mid, group.end());
            bool keptA = self(self, std::move(a), false);
            self(self, std::move(b), keptA);
            return false;
        };
        rec(rec, rest, false);
    }
    std::sort(mcs.begin(), mcs.end());
    return mcs;
}

}  // namespace

std::vector<LabelId> growMss(Problem& p, MssStrategy strategy) {
    if (sat(p, p.soft)) throw Error("nothing to correct: the constraints are satisfiable");
    if (!sat(p, {})) throw Error("no correction within the soft constraints: the hard constraints are unsatisfiable");
    return growFrom(p, {}, strategy);
}

std::vector<LabelId> growMssLinear(Problem& p) { return growMss(p, MssStrategy::Linear); }
std::vector<LabelId> growMssBisect(Problem& p) { return growMss(p, MssStrategy::Bisect); }

std::vector<LabelId> shrinkMus(Problem& p, const std::vector<LabelId>& seed) {
    std::set<LabelId> soft(seed.begin(), seed.end());
    auto restrictToSeed = [&](const std::vector<LabelId>& core) {
        std::vector<LabelId> out;
        for (LabelId c : core)
            if (soft.count(c)) out.push_back(c);
        return out;
    };
    auto r = run(p, seed);
    if (r.status != smt::CheckStatus::Unsat) throw Error("shrink: seed is satisfiable");
    std::vector<LabelId> cand = restrictToSeed(r.core);
    std::set<LabelId> critical;
    for (;;) {
        auto it = std::find_if(cand.begin(), cand.end(), [&](LabelId c) { return !critical.count(c); });
        if (it == cand.end()) break;
        LabelId c = *it;
        std::vector<LabelId> trial;
        for (LabelId x : cand)
            if (x != c) trial.push_back(x);
        auto t = run(p, trial);
        if (t.status == smt::CheckStatus::Unsat)
            cand = restrictToSeed(t.core);
        else
            critical.insert(c);
    }
    std::sort(cand.begin(), cand.end());
    return cand;
}

bool verifyMcs(Problem& p, const std::vector<LabelId>& candidate) {
    std::set<LabelId> drop(candidate.begin(), candidate.end());
    if (drop.empty() || drop.size() != candidate.size()) return false;
    for (LabelId c : candidate)
        if (std::find(p.soft.begin(), p.soft.end(), c) == p.soft.end()) return false;
    std::vector<LabelId> kept;
    for (LabelId c : p.soft)
        if (!drop.count(c)) kept.push_back(c);
    if (!sat(p, kept)) return false;
    for (LabelId c : candidate) {
        kept.push_back(c);
        bool s = sat(p, kept);
        kept.pop_back();
        if (s) return false;
    }
    return true;
}

Enumeration enumerateMcses(Problem& p, const EnumerateOptions& options) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const auto checks0 = p.system->checkCount();
    auto outOfTime = [&] {
        return options.timeBudgetSeconds >= 0 &&
               std::chrono::duration<double>(Clock::now() - start).count() > options.timeBudgetSeconds;
    };

    Enumeration out;
    const std::size_t n = p.soft.size();
    sat::Solver map;
    std::vector<sat::Lit> x;
    std::unordered_map<LabelId, std::size_t> index;
    for (std::size_t i = 0; i < n; ++i) {
        x.push_back(sat::Lit::make(map.newVar(true)));
        index[p.soft[i]] = i;
    }

    try {
        for (;;) {
            if (outOfTime()) {
                out.complete = false;
                break;
            }
            if (map.solve() != sat::Status::Sat) break;
            std::vector<bool> in(n);
            for (std::size_t i = 0; i < n; ++i) in[i] = map.modelValue(x[i]);
            if (options.maximalSeeds) {
                // Lowest label first: add each missing label the map still allows.
                for (std::size_t i = 0; i < n; ++i) {
                    if (in[i]) continue;
                    std::vector<sat::Lit> assume;
                    for (std::size_t j = 0; j < n; ++j)
                        if (in[j]) assume.push_back(x[j]);
                    assume.push_back(x[i]);
                    if (map.solve(assume) == sat::Status::Sat)
                        for (std::size_t j = 0; j < n; ++j) in[j] = in[j] || map.modelValue(x[j]);
                }
            }
            std::vector<LabelId> seed;
            for (std::size_t i = 0; i < n; ++i)
                if (in[i]) seed.push_back(p.soft[i]);

            if (sat(p, seed)) {
                std::vector<LabelId> mcs;
                if (options.maximalSeeds) {
                    for (std::size_t i = 0; i < n; ++i)
                        if (!in[i]) mcs.push_back(p.soft[i]);
                } else {
                    mcs = growFrom(p, seed, options.grow);
                }
                if (mcs.empty()) break;  // everything satisfiable: nothing to correct
                std::vector<sat::Lit> clause;
                for (LabelId c : mcs) clause.push_back(x[index.at(c)]);
                map.addClause(clause);
                out.mcses.push_back(std::move(mcs));
            } else {
                auto mus = shrinkMus(p, seed);
                if (mus.empty()) break;  // hard constraints alone are unsatisfiable
                std::vector<sat::Lit> clause;
                for (LabelId c : mus) clause.push_back(~x[index.at(c)]);
                map.addClause(clause);
                out.muses.push_back(std::move(mus));
            }
        }
    } catch (const SolverTimeout&) {
        out.complete = false;
    }
    out.checks = p.system->checkCount() - checks0;
    return out;
}

}  // namespace cfgloc::mcs
