#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "cfgloc/sat/cdcl.hpp"
#include "cfgloc/smt/term.hpp"

namespace cfgloc::smt {

using sat::Lit;

// Receives the clauses produced while lowering terms.
class ClauseSink {
public:
    virtual ~ClauseSink() = default;
    virtual sat::Var newVar() = 0;
    virtual void addClause(std::span<const Lit> lits) = 0;
};

// Plain clause list, for DIMACS output and standalone solving.
struct Cnf {
    int numVars = 0;
    std::vector<std::vector<Lit>> clauses;
};

class CnfSink : public ClauseSink {
public:
    explicit CnfSink(Cnf& cnf) : cnf_(cnf) {}
    sat::Var newVar() override { return cnf_.numVars++; }
    void addClause(std::span<const Lit> lits) override { cnf_.clauses.emplace_back(lits.begin(), lits.end()); }

private:
    Cnf& cnf_;
};

// Lowers boolean and bit-vector terms to CNF using Tseitin gates with full
// bi-implication clauses. Lowered terms are cached, so shared subterms are
// encoded once. Constant inputs are folded at the gate level.
class BitBlaster {
public:
    BitBlaster(const TermManager& tm, ClauseSink& sink);

    Lit lowerBool(Term t);
    const std::vector<Lit>& lowerInt(Term t);

    // Literal bound to the given variable term, lowering it if needed.
    Lit boolVarLit(Term var) { return lowerBool(var); }
    const std::vector<Lit>& intVarBits(Term var) { return lowerInt(var); }
    bool lowered(Term t) const { return boolCache_.count(t.id) || intCache_.count(t.id); }

    Lit trueLit() const { return true_; }
    Lit falseLit() const { return ~true_; }

private:
    bool isTrue(Lit l) const { return l == true_; }
    bool isFalse(Lit l) const { return l == ~true_; }
    Lit fresh();
    void clause(std::initializer_list<Lit> lits);

    Lit gateAnd(std::vector<Lit> ins);
    Lit gateOr(std::vector<Lit> ins);
    Lit gateXor(Lit a, Lit b);
    Lit gateIte(Lit c, Lit t, Lit e);
    Lit gateMaj(Lit a, Lit b, Lit c);
    Lit ult(const std::vector<Lit>& a, const std::vector<Lit>& b);
    std::vector<Lit> add(const std::vector<Lit>& a, const std::vector<Lit>& b);
    std::vector<Lit> constBits(std::uint64_t value, unsigned width) const;

    Lit lowerBoolNode(Term t);
    std::vector<Lit> lowerIntNode(Term t);

    const TermManager& tm_;
    ClauseSink& sink_;
    Lit true_;
    std::unordered_map<std::uint32_t, Lit> boolCache_;
    std::unordered_map<std::uint32_t, std::vector<Lit>> intCache_;
};

// Standalone lowering: returns the clauses defining `formula` and the literal
// that stands for it. The caller asserts the root literal if it wants the
// formula to hold.
struct Lowered {
    Cnf cnf;
    Lit root;
};
Lowered lowerToCnf(const TermManager& tm, Term formula);

struct CnfResult {
    sat::Status status;
    std::vector<bool> model;      // Sat
    std::vector<Lit> core;        // Unsat: failed assumptions
};
CnfResult solveCnf(const Cnf& cnf, std::span<const Lit> assumptions = {}, std::int64_t conflictBudget = -1);

void writeDimacs(std::ostream& out, const Cnf& cnf);

}  // namespace cfgloc::smt
