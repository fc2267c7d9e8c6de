#include "cfgloc/smt/blast.hpp"

#include <algorithm>
#include <ostream>

#include "cfgloc/error.hpp"

namespace cfgloc::smt {

BitBlaster::BitBlaster(const TermManager& tm, ClauseSink& sink) : tm_(tm), sink_(sink) {
    true_ = Lit::make(sink_.newVar());
    sink_.addClause(std::span<const Lit>(&true_, 1));
}

Lit BitBlaster::fresh() { return Lit::make(sink_.newVar()); }

void BitBlaster::clause(std::initializer_list<Lit> lits) {
    sink_.addClause(std::span<const Lit>(lits.begin(), lits.size()));
}

Lit BitBlaster::gateAnd(std::vector<Lit> ins) {
    std::vector<Lit> kept;
    for (Lit l : ins) {
        if (isFalse(l)) return falseLit();
        if (isTrue(l)) continue;
        kept.push_back(l);
    }
    std::sort(kept.begin(), kept.end());
    kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
    for (std::size_t i = 1; i < kept.size(); ++i)
        if (kept[i] == ~kept[i - 1]) return falseLit();
    if (kept.empty()) return trueLit();
    if (kept.size() == 1) return kept[0];
    Lit g = fresh();
    std::vector<Lit> big{g};
    for (Lit l : kept) {
        clause({~g, l});
        big.push_back(~l);
    }
    sink_.addClause(big);
    return g;
}

Lit BitBlaster::gateOr(std::vector<Lit> ins) {
    for (Lit& l : ins) l = ~l;
    return ~gateAnd(std::move(ins));
}

Lit BitBlaster::gateXor(Lit a, Lit b) {
    if (isFalse(a)) return b;
    if (isFalse(b)) return a;
    if (isTrue(a)) return ~b;
    if (isTrue(b)) return ~a;
    if (a == b) return falseLit();
    if (a == ~b) return trueLit();
    Lit g = fresh();
    clause({~g, a, b});
    clause({~g, ~a, ~b});
    clause({g, ~a, b});
    clause({g, a, ~b});
    return g;
}

Lit BitBlaster::gateIte(Lit c, Lit t, Lit e) {
    if (isTrue(c)) return t;
    if (isFalse(c)) return e;
    if (t == e) return t;
    if (isTrue(t)) return gateOr({c, e});
    if (isFalse(t)) return gateAnd({~c, e});
    if (isTrue(e)) return gateOr({~c, t});
    if (isFalse(e)) return gateAnd({c, t});
    Lit g = fresh();
    clause({~c, ~t, g});
    clause({~c, t, ~g});
    clause({c, ~e, g});
    clause({c, e, ~g});
    // redundant, helps propagation when both branches agree
    clause({~t, ~e, g});
    clause({t, e, ~g});
    return g;
}

Lit BitBlaster::gateMaj(Lit a, Lit b, Lit c) {
    return gateOr({gateAnd({a, b}), gateAnd({a, c}), gateAnd({b, c})});
}

Lit BitBlaster::ult(const std::vector<Lit>& a, const std::vector<Lit>& b) {
    // scan from the least significant bit; a higher differing bit overrides
    Lit lt = falseLit();
    for (std::size_t i = 0; i < a.size(); ++i) {
        Lit here = gateAnd({~a[i], b[i]});
        Lit same = ~gateXor(a[i], b[i]);
        lt = gateOr({here, gateAnd({same, lt})});
    }
    return lt;
}

std::vector<Lit> BitBlaster::add(const std::vector<Lit>& a, const std::vector<Lit>& b) {
    std::vector<Lit> out(a.size());
    Lit carry = falseLit();
    for (std::size_t i = 0; i < a.size(); ++i) {
        out[i] = gateXor(gateXor(a[i], b[i]), carry);
        if (i + 1 < a.size()) carry = gateMaj(a[i], b[i], carry);
    }
    return out;
}

std::vector<Lit> BitBlaster::constBits(std::uint64_t value, unsigned width) const {
    std::vector<Lit> out(width);
    for (unsigned i = 0; i < width; ++i) out[i] = ((value >> i) & 1) ? trueLit() : falseLit();
    return out;
}

Lit BitBlaster::lowerBool(Term t) {
    if (!tm_.isBool(t)) throw InternalError("lowerBool on integer term");
    if (auto it = boolCache_.find(t.id); it != boolCache_.end()) return it->second;
    // lower children first without recursion so deep terms are safe
    std::vector<std::pair<std::uint32_t, bool>> stack{{t.id, false}};
    while (!stack.empty()) {
        auto [id, expanded] = stack.back();
        stack.pop_back();
        bool isB = tm_.node(Term{id}).width == 0;
        if (isB ? boolCache_.count(id) : intCache_.count(id)) continue;
        if (!expanded) {
            stack.push_back({id, true});
            for (auto k : tm_.node(Term{id}).kids) stack.push_back({k, false});
            continue;
        }
        if (isB)
            boolCache_[id] = lowerBoolNode(Term{id});
        else
            intCache_[id] = lowerIntNode(Term{id});
    }
    return boolCache_.at(t.id);
}

const std::vector<Lit>& BitBlaster::lowerInt(Term t) {
    if (tm_.isBool(t)) throw InternalError("lowerInt on boolean term");
    if (auto it = intCache_.find(t.id); it != intCache_.end()) return it->second;
    const Node& n = tm_.node(t);
    for (auto k : n.kids) {
        if (tm_.isBool(Term{k}))
            lowerBool(Term{k});
        else
            lowerInt(Term{k});
    }
    intCache_[t.id] = lowerIntNode(t);
    return intCache_.at(t.id);
}

Lit BitBlaster::lowerBoolNode(Term t) {
    const Node& n = tm_.node(t);
    auto kb = [&](std::size_t i) { return boolCache_.at(n.kids[i]); };
    auto ki = [&](std::size_t i) -> const std::vector<Lit>& { return intCache_.at(n.kids[i]); };
    switch (n.op) {
        case Op::BoolConst: return n.value ? trueLit() : falseLit();
        case Op::BoolVar: return fresh();
        case Op::Not: return ~kb(0);
        case Op::And:
        case Op::Or: {
            std::vector<Lit> ins;
            for (std::size_t i = 0; i < n.kids.size(); ++i) ins.push_back(kb(i));
            return n.op == Op::And ? gateAnd(std::move(ins)) : gateOr(std::move(ins));
        }
        case Op::Implies: return gateOr({~kb(0), kb(1)});
        case Op::Iff: return ~gateXor(kb(0), kb(1));
        case Op::Ite: return gateIte(kb(0), kb(1), kb(2));
        case Op::Eq: {
            const auto& a = ki(0);
            const auto& b = ki(1);
            std::vector<Lit> eqs;
            for (std::size_t i = 0; i < a.size(); ++i) eqs.push_back(~gateXor(a[i], b[i]));
            return gateAnd(std::move(eqs));
        }
        case Op::Ult: return ult(ki(0), ki(1));
        case Op::Ule: return ~ult(ki(1), ki(0));
        default: throw InternalError("unexpected boolean node");
    }
}

std::vector<Lit> BitBlaster::lowerIntNode(Term t) {
    const Node& n = tm_.node(t);
    switch (n.op) {
        case Op::IntConst: return constBits(n.value, n.width);
        case Op::IntVar: {
            std::vector<Lit> out(n.width);
            for (auto& l : out) l = fresh();
            return out;
        }
        case Op::Ite: {
            Lit c = boolCache_.at(n.kids[0]);
            const auto& a = intCache_.at(n.kids[1]);
            const auto& b = intCache_.at(n.kids[2]);
            std::vector<Lit> out(n.width);
            for (unsigned i = 0; i < n.width; ++i) out[i] = gateIte(c, a[i], b[i]);
            return out;
        }
        case Op::Add: return add(intCache_.at(n.kids[0]), intCache_.at(n.kids[1]));
        case Op::AddConst: return add(intCache_.at(n.kids[0]), constBits(n.value, n.width));
        default: throw InternalError("unexpected integer node");
    }
}

Lowered lowerToCnf(const TermManager& tm, Term formula) {
    Lowered out;
    CnfSink sink(out.cnf);
    BitBlaster bb(tm, sink);
    out.root = bb.lowerBool(formula);
    return out;
}

CnfResult solveCnf(const Cnf& cnf, std::span<const Lit> assumptions, std::int64_t conflictBudget) {
    sat::Solver s;
    for (int i = 0; i < cnf.numVars; ++i) s.newVar();
    for (const auto& c : cnf.clauses) s.addClause(c);
    s.setConflictBudget(conflictBudget);
    CnfResult r;
    r.status = s.solve(assumptions);
    if (r.status == sat::Status::Sat) {
        r.model.resize(cnf.numVars);
        for (int i = 0; i < cnf.numVars; ++i) r.model[i] = s.modelValue(i);
    } else if (r.status == sat::Status::Unsat) {
        r.core = s.failedAssumptions();
    }
    return r;
}

void writeDimacs(std::ostream& out, const Cnf& cnf) {
    out << "p cnf " << cnf.numVars << ' ' << cnf.clauses.size() << '\n';
    for (const auto& c : cnf.clauses) {
        for (Lit l : c) out << (l.negated() ? -(l.var() + 1) : l.var() + 1) << ' ';
        out << "0\n";
    }
}

}  // namespace cfgloc::smt
