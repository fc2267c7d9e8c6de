#pragma once

#include <cstdint>
#include <vector>

#include "cfgloc/smt/system.hpp"

namespace cfgloc::mcs {

using smt::LabelId;

// Correction problem: `hard` labels are always enabled, corrections are drawn
// from `soft` only.
struct Problem {
    smt::System* system = nullptr;
    std::vector<LabelId> hard;
    std::vector<LabelId> soft;
};

enum class MssStrategy { Linear, Bisect };

// Complement of one maximal satisfiable superset of `hard`, sorted. Throws
// Error("nothing to correct") when hard and soft are jointly satisfiable and
// SolverTimeout when a check runs out of budget.
std::vector<LabelId> growMssLinear(Problem& p);
std::vector<LabelId> growMssBisect(Problem& p);
std::vector<LabelId> growMss(Problem& p, MssStrategy strategy);

// Minimal subset of `seed` that is unsatisfiable together with the hard
// labels. Requires hard plus seed to be unsatisfiable.
std::vector<LabelId> shrinkMus(Problem& p, const std::vector<LabelId>& seed);

// Disabling the candidate satisfies the system and re-enabling any single
// member does not.
bool verifyMcs(Problem& p, const std::vector<LabelId>& candidate);

struct EnumerateOptions {
    double timeBudgetSeconds = -1;  // negative: unlimited
    // Take maximal unexplored subsets as seeds so that satisfiable seeds are
    // already maximal; otherwise grow each satisfiable seed.
    bool maximalSeeds = true;
    MssStrategy grow = MssStrategy::Bisect;
};

struct Enumeration {
    std::vector<std::vector<LabelId>> mcses;  // discovery order, each sorted
    std::vector<std::vector<LabelId>> muses;
    bool complete = true;
    std::uint64_t checks = 0;
};

Enumeration enumerateMcses(Problem& p, const EnumerateOptions& options = {});

}  // namespace cfgloc::mcs
