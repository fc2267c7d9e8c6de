#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace cfgloc::sat {

using Var = int;

// A literal is 2*var + sign, sign 1 meaning negated.
struct Lit {
    int x = -2;

    static constexpr Lit make(Var v, bool negated = false) { return Lit{2 * v + (negated ? 1 : 0)}; }
    constexpr Var var() const { return x >> 1; }
    constexpr bool negated() const { return (x & 1) != 0; }
    constexpr Lit operator~() const { return Lit{x ^ 1}; }
    constexpr bool operator==(const Lit&) const = default;
    constexpr auto operator<=>(const Lit&) const = default;
    constexpr int index() const { return x; }
};

inline constexpr Lit kUndefLit{-2};

enum class LBool : std::uint8_t { False = 0, True = 1, Undef = 2 };

inline LBool operator^(LBool b, bool flip) {
    if (b == LBool::Undef) return b;
    return static_cast<LBool>(static_cast<std::uint8_t>(b) ^ static_cast<std::uint8_t>(flip));
}

enum class Status { Sat, Unsat, Unknown };

struct SolverStats {
    std::uint64_t solves = 0;
    std::uint64_t decisions = 0;
    std::uint64_t propagations = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t restarts = 0;
};

// Conflict-driven clause-learning SAT solver with incremental clause addition
// and solving under assumptions. Heuristics are fully deterministic: variables
// start with activity 0 and ties in the decision heap break towards the lowest
// variable index.
class Solver {
public:
    Solver();
    ~Solver();
    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;
    Solver(Solver&&) noexcept;
    Solver& operator=(Solver&&) noexcept;

    Var newVar(bool preferTrue = false);
    int numVars() const;
    std::size_t numClauses() const;

    // Adds a clause at decision level 0. Returns false once the clause set is
    // known to be unsatisfiable without assumptions.
    bool addClause(std::span<const Lit> lits);
    bool addClause(std::initializer_list<Lit> lits) {
        return addClause(std::span<const Lit>(lits.begin(), lits.size()));
    }

    Status solve(std::span<const Lit> assumptions = {});

    // Valid after Sat.
    bool modelValue(Var v) const;
    bool modelValue(Lit l) const { return modelValue(l.var()) != l.negated(); }
    const std::vector<LBool>& model() const;

    // After Unsat: the subset of the assumptions that took part in the final
    // conflict. Empty if the clause set is unsatisfiable on its own.
    const std::vector<Lit>& failedAssumptions() const;

    // Maximum conflicts per solve call; negative disables the budget.
    void setConflictBudget(std::int64_t conflicts);
    void setPreferredPhase(Var v, bool value);

    bool okay() const;
    const SolverStats& stats() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace cfgloc::sat
