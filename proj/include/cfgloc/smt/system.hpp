#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cfgloc/sat/cdcl.hpp"
#include "cfgloc/smt/blast.hpp"
#include "cfgloc/smt/term.hpp"

namespace cfgloc::smt {

enum class Category : std::uint8_t { Config, Logic, Requirement, FailurePin };

const char* categoryName(Category c);

using LabelId = int;

struct Label {
    LabelId id = -1;
    Category category = Category::Logic;
    std::string meta;  // source span or symbol name
};

enum class CheckStatus { Sat, Unsat, Timeout };

struct CheckResult {
    CheckStatus status = CheckStatus::Timeout;
    Model model;               // Sat
    std::vector<LabelId> core; // Unsat, sorted
};

// A set of labeled formulas over one TermManager. Every labeled formula is
// guarded by its own activation literal, so a check enables exactly the
// constraints whose labels are passed as assumptions. Formulas asserted with
// `assertHard` hold in every check.
class System {
public:
    explicit System(bool recordClauses = false);
    System(const System&) = delete;
    System& operator=(const System&) = delete;

    TermManager& terms() { return tm_; }
    const TermManager& terms() const { return tm_; }

    void assertLabeled(Term formula, Label label);
    // Allocates the next free id.
    LabelId add(Term formula, Category category, std::string meta);
    void assertHard(Term formula);

    CheckResult check(std::span<const LabelId> assumptions);
    CheckResult check(std::initializer_list<LabelId> assumptions) {
        return check(std::span<const LabelId>(assumptions.begin(), assumptions.size()));
    }
    // Convenience: is the conjunction of the given labels satisfiable?
    // Throws SolverTimeout when the budget runs out.
    bool satisfiable(std::span<const LabelId> assumptions);

    std::uint64_t checkCount() const { return checks_; }

    // Per-check conflict budget; negative means unlimited.
    void setConflictBudget(std::int64_t conflicts) { solver_.setConflictBudget(conflicts); }

    bool hasLabel(LabelId id) const { return byId_.count(id) != 0; }
    const Label& label(LabelId id) const { return labels_[byId_.at(id)].label; }
    Term formula(LabelId id) const { return labels_[byId_.at(id)].formula; }
    std::vector<LabelId> labels(Category c) const;
    std::vector<LabelId> allLabels() const;

    // Literal standing for a boolean term, for callers that add raw clauses
    // such as blocking clauses.
    sat::Lit literal(Term boolTerm);

    // Requires a system constructed with recordClauses.
    void writeDimacs(std::ostream& out) const;
    // One constraint per line: id, category, meta, formula.
    void writeText(std::ostream& out) const;

    const sat::SolverStats& solverStats() const { return solver_.stats(); }

private:
    class Sink : public ClauseSink {
    public:
        explicit Sink(System& s) : s_(s) {}
        sat::Var newVar() override;
        void addClause(std::span<const Lit> lits) override;

    private:
        System& s_;
    };

    struct Entry {
        Label label;
        Term formula;
        sat::Lit act;
    };

    bool recording_;
    Cnf recorded_;
    TermManager tm_;
    sat::Solver solver_;
    Sink sink_;
    BitBlaster blaster_;
    std::vector<Entry> labels_;
    std::unordered_map<LabelId, std::size_t> byId_;
    std::unordered_map<int, LabelId> byActVar_;
    LabelId nextId_ = 0;
    std::uint64_t checks_ = 0;
};

}  // namespace cfgloc::smt
