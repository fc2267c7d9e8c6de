#include "cfgloc/sat/cdcl.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace cfgloc::sat {

namespace {

using CRef = std::uint32_t;
constexpr CRef kNoReason = UINT32_MAX;

struct Clause {
    std::vector<Lit> lits;
    double activity = 0;
    bool learnt = false;
    bool deleted = false;
};

struct Watcher {
    CRef cref;
    Lit blocker;
};

// Binary max-heap over variables ordered by activity, ties to lower index.
class VarHeap {
public:
    explicit VarHeap(const std::vector<double>& act) : act_(act) {}

    bool empty() const { return heap_.empty(); }
    bool contains(Var v) const { return v < static_cast<Var>(pos_.size()) && pos_[v] >= 0; }

    void insert(Var v) {
        if (v >= static_cast<Var>(pos_.size())) pos_.resize(v + 1, -1);
        if (contains(v)) return;
        pos_[v] = static_cast<int>(heap_.size());
        heap_.push_back(v);
        up(pos_[v]);
    }

    void increased(Var v) {
        if (contains(v)) up(pos_[v]);
    }

    Var pop() {
        Var top = heap_.front();
        heap_.front() = heap_.back();
        pos_[heap_.front()] = 0;
        heap_.pop_back();
        pos_[top] = -1;
        if (!heap_.empty()) down(0);
        return top;
    }

private:
    bool before(Var a, Var b) const {
        if (act_[a] != act_[b]) return act_[a] > act_[b];
        return a < b;
    }
    void up(int i) {
        Var v = heap_[i];
        while (i > 0) {
            int parent = (i - 1) >> 1;
            if (!before(v, heap_[parent])) break;
            heap_[i] = heap_[parent];
            pos_[heap_[i]] = i;
            i = parent;
        }
        heap_[i] = v;
        pos_[v] = i;
    }
    void down(int i) {
        Var v = heap_[i];
        const int n = static_cast<int>(heap_.size());
        for (;;) {
            int child = 2 * i + 1;
            if (child >= n) break;
            if (child + 1 < n && before(heap_[child + 1], heap_[child])) ++child;
            if (!before(heap_[child], v)) break;
            heap_[i] = heap_[child];
            pos_[heap_[i]] = i;
            i = child;
        }
        heap_[i] = v;
        pos_[v] = i;
    }

    const std::vector<double>& act_;
    std::vector<Var> heap_;
    std::vector<int> pos_;
};

double luby(double y, int x) {
    int size = 1, seq = 0;
    while (size < x + 1) {
        ++seq;
        size = 2 * size + 1;
    }
    while (size - 1 != x) {
        size = (size - 1) >> 1;
        --seq;
        x = x % size;
    }
    return std::pow(y, seq);
}

}  // namespace

struct Solver::Impl {
    std::vector<Clause> clauses;
    std::vector<CRef> freeSlots;
    std::vector<CRef> learnts;
    std::vector<std::vector<Watcher>> watches;  // indexed by literal

    std::vector<LBool> assigns;
    std::vector<int> level;
    std::vector<CRef> reason;
    std::vector<double> activity;
    std::vector<bool> polarity;  // saved phase: true means assign negatively
    std::vector<char> seen;
    VarHeap heap{activity};

    std::vector<Lit> trail;
    std::vector<int> trailLim;
    std::size_t qhead = 0;

    std::vector<LBool> modelVals;
    std::vector<Lit> conflictSet;
    std::vector<Lit> assumptions;

    double varInc = 1.0;
    double clauseInc = 1.0;
    double maxLearnts = 0;
    std::int64_t conflictBudget = -1;
    bool ok = true;
    SolverStats stats;
    std::size_t liveClauses = 0;

    int decisionLevel() const { return static_cast<int>(trailLim.size()); }

    LBool value(Var v) const { return assigns[v]; }
    LBool value(Lit l) const { return assigns[l.var()] ^ l.negated(); }

    CRef allocClause(std::vector<Lit> lits, bool learnt) {
        CRef cr;
        if (!freeSlots.empty()) {
            cr = freeSlots.back();
            freeSlots.pop_back();
            clauses[cr] = Clause{std::move(lits), 0, learnt, false};
        } else {
            cr = static_cast<CRef>(clauses.size());
            clauses.push_back(Clause{std::move(lits), 0, learnt, false});
        }
        ++liveClauses;
        return cr;
    }

    void attach(CRef cr) {
        const auto& c = clauses[cr].lits;
        watches[(~c[0]).index()].push_back({cr, c[1]});
        watches[(~c[1]).index()].push_back({cr, c[0]});
    }

    void uncheckedEnqueue(Lit p, CRef from) {
        Var v = p.var();
        assigns[v] = p.negated() ? LBool::False : LBool::True;
        level[v] = decisionLevel();
        reason[v] = from;
        trail.push_back(p);
    }

    void newDecisionLevel() { trailLim.push_back(static_cast<int>(trail.size())); }

    void cancelUntil(int lvl) {
        if (decisionLevel() <= lvl) return;
        for (int c = static_cast<int>(trail.size()) - 1; c >= trailLim[lvl]; --c) {
            Var x = trail[c].var();
            assigns[x] = LBool::Undef;
            polarity[x] = trail[c].negated();
            heap.insert(x);
        }
        qhead = trailLim[lvl];
        trail.resize(trailLim[lvl]);
        trailLim.resize(lvl);
    }

    CRef propagate() {
        CRef confl = kNoReason;
        while (qhead < trail.size()) {
            Lit p = trail[qhead++];
            auto& ws = watches[p.index()];
            ++stats.propagations;
            std::size_t i = 0, j = 0;
            const std::size_t n = ws.size();
            while (i < n) {
                Watcher w = ws[i];
                if (value(w.blocker) == LBool::True) {
                    ws[j++] = ws[i++];
                    continue;
                }
                Clause& c = clauses[w.cref];
                if (c.deleted) {
                    ++i;
                    continue;
                }
                auto& lits = c.lits;
                Lit falseLit = ~p;
                if (lits[0] == falseLit) std::swap(lits[0], lits[1]);
                ++i;
                Lit first = lits[0];
                Watcher nw{w.cref, first};
                if (first != w.blocker && value(first) == LBool::True) {
                    ws[j++] = nw;
                    continue;
                }
                bool found = false;
                for (std::size_t k = 2; k < lits.size(); ++k) {
                    if (value(lits[k]) != LBool::False) {
                        lits[1] = lits[k];
                        lits[k] = falseLit;
                        watches[(~lits[1]).index()].push_back(nw);
                        found = true;
                        break;
                    }
                }
                if (found) continue;
                ws[j++] = nw;
                if (value(first) == LBool::False) {
                    confl = w.cref;
                    qhead = trail.size();
                    while (i < n) ws[j++] = ws[i++];
                } else {
                    uncheckedEnqueue(first, w.cref);
                }
            }
            ws.resize(j);
        }
        return confl;
    }

    void varBump(Var v) {
        if ((activity[v] += varInc) > 1e100) {
            for (auto& a : activity) a *= 1e-100;
            varInc *= 1e-100;
        }
        heap.increased(v);
    }

    void clauseBump(Clause& c) {
        if ((c.activity += clauseInc) > 1e20) {
            for (CRef cr : learnts) clauses[cr].activity *= 1e-20;
            clauseInc *= 1e-20;
        }
    }

    unsigned abstractLevel(Var v) const { return 1u << (level[v] & 31); }

    bool litRedundant(Lit p, unsigned abstractLevels, std::vector<Lit>& toClear) {
        std::vector<Lit> stack{p};
        const std::size_t top = toClear.size();
        while (!stack.empty()) {
            Var v = stack.back().var();
            stack.pop_back();
            const auto& c = clauses[reason[v]].lits;
            for (std::size_t i = 1; i < c.size(); ++i) {
                Lit q = c[i];
                if (!seen[q.var()] && level[q.var()] > 0) {
                    if (reason[q.var()] != kNoReason && (abstractLevel(q.var()) & abstractLevels) != 0) {
                        seen[q.var()] = 1;
                        stack.push_back(q);
                        toClear.push_back(q);
                    } else {
                        for (std::size_t j = top; j < toClear.size(); ++j) seen[toClear[j].var()] = 0;
                        toClear.resize(top);
                        return false;
                    }
                }
            }
        }
        return true;
    }

    void analyze(CRef confl, std::vector<Lit>& learnt, int& backtrackLevel) {
        int pathC = 0;
        Lit p = kUndefLit;
        learnt.clear();
        learnt.push_back(kUndefLit);
        int index = static_cast<int>(trail.size()) - 1;
        do {
            Clause& c = clauses[confl];
            if (c.learnt) clauseBump(c);
            for (std::size_t j = (p == kUndefLit) ? 0 : 1; j < c.lits.size(); ++j) {
                Lit q = c.lits[j];
                if (!seen[q.var()] && level[q.var()] > 0) {
                    varBump(q.var());
                    seen[q.var()] = 1;
                    if (level[q.var()] >= decisionLevel())
                        ++pathC;
                    else
                        learnt.push_back(q);
                }
            }
            while (!seen[trail[index--].var()]) {
            }
            p = trail[index + 1];
            confl = reason[p.var()];
            seen[p.var()] = 0;
            --pathC;
        } while (pathC > 0);
        learnt[0] = ~p;

        std::vector<Lit> toClear(learnt.begin(), learnt.end());
        unsigned abstractLevels = 0;
        for (std::size_t i = 1; i < learnt.size(); ++i) abstractLevels |= abstractLevel(learnt[i].var());
        std::size_t j = 1;
        for (std::size_t i = 1; i < learnt.size(); ++i) {
            if (reason[learnt[i].var()] == kNoReason || !litRedundant(learnt[i], abstractLevels, toClear))
                learnt[j++] = learnt[i];
        }
        learnt.resize(j);

        if (learnt.size() == 1) {
            backtrackLevel = 0;
        } else {
            std::size_t maxI = 1;
            for (std::size_t i = 2; i < learnt.size(); ++i)
                if (level[learnt[i].var()] > level[learnt[maxI].var()]) maxI = i;
            std::swap(learnt[1], learnt[maxI]);
            backtrackLevel = level[learnt[1].var()];
        }
        for (Lit l : toClear) seen[l.var()] = 0;
    }

    // Collects the assumptions responsible for ~p being forced.
    void analyzeFinal(Lit p) {
        conflictSet.clear();
        conflictSet.push_back(p);
        if (decisionLevel() == 0) return;
        seen[p.var()] = 1;
        for (int i = static_cast<int>(trail.size()) - 1; i >= trailLim[0]; --i) {
            Var x = trail[i].var();
            if (!seen[x]) continue;
            if (reason[x] == kNoReason) {
                conflictSet.push_back(~trail[i]);
            } else {
                const auto& c = clauses[reason[x]].lits;
                for (std::size_t j = 1; j < c.size(); ++j)
                    if (level[c[j].var()] > 0) seen[c[j].var()] = 1;
            }
            seen[x] = 0;
        }
        seen[p.var()] = 0;
    }

    bool locked(CRef cr) const {
        const auto& c = clauses[cr].lits;
        Var v = c[0].var();
        return value(c[0]) == LBool::True && reason[v] == cr;
    }

    void removeClause(CRef cr) {
        Clause& c = clauses[cr];
        if (locked(cr)) reason[c.lits[0].var()] = kNoReason;
        c.deleted = true;
        c.lits.clear();
        c.lits.shrink_to_fit();
        freeSlots.push_back(cr);
        --liveClauses;
    }

    void purgeWatches() {
        for (auto& ws : watches) {
            std::erase_if(ws, [&](const Watcher& w) { return clauses[w.cref].deleted; });
        }
    }

    void reduceDb() {
        std::sort(learnts.begin(), learnts.end(), [&](CRef a, CRef b) {
            const Clause& x = clauses[a];
            const Clause& y = clauses[b];
            if ((x.lits.size() > 2) != (y.lits.size() > 2)) return x.lits.size() > 2;
            if (x.activity != y.activity) return x.activity < y.activity;
            return a < b;
        });
        const double extraLim = clauseInc / std::max<std::size_t>(learnts.size(), 1);
        std::vector<CRef> kept;
        kept.reserve(learnts.size());
        const std::size_t half = learnts.size() / 2;
        for (std::size_t i = 0; i < learnts.size(); ++i) {
            CRef cr = learnts[i];
            const Clause& c = clauses[cr];
            if (c.lits.size() > 2 && !locked(cr) && (i < half || c.activity < extraLim))
                removeClause(cr);
            else
                kept.push_back(cr);
        }
        learnts.swap(kept);
        purgeWatches();
        // freed slots may be reused only after watches are purged
    }

    Lit pickBranch() {
        while (!heap.empty()) {
            Var v = heap.pop();
            if (value(v) == LBool::Undef) {
                ++stats.decisions;
                return Lit::make(v, polarity[v]);
            }
        }
        return kUndefLit;
    }

    Status search(int nofConflicts, std::int64_t& budgetLeft) {
        int conflictC = 0;
        std::vector<Lit> learnt;
        for (;;) {
            CRef confl = propagate();
            if (confl != kNoReason) {
                ++stats.conflicts;
                ++conflictC;
                if (budgetLeft > 0) --budgetLeft;
                if (decisionLevel() == 0) return Status::Unsat;
                int btLevel = 0;
                analyze(confl, learnt, btLevel);
                cancelUntil(btLevel);
                if (learnt.size() == 1) {
                    uncheckedEnqueue(learnt[0], kNoReason);
                } else {
                    CRef cr = allocClause(learnt, true);
                    learnts.push_back(cr);
                    attach(cr);
                    clauseBump(clauses[cr]);
                    uncheckedEnqueue(learnt[0], cr);
                }
                varInc *= (1 / 0.95);
                clauseInc *= (1 / 0.999);
            } else {
                if ((nofConflicts >= 0 && conflictC >= nofConflicts) || budgetLeft == 0) {
                    return Status::Unknown;
                }
                if (static_cast<double>(learnts.size()) - static_cast<double>(trail.size()) >= maxLearnts) reduceDb();

                Lit next = kUndefLit;
                while (decisionLevel() < static_cast<int>(assumptions.size())) {
                    Lit p = assumptions[decisionLevel()];
                    if (value(p) == LBool::True) {
                        newDecisionLevel();
                    } else if (value(p) == LBool::False) {
                        analyzeFinal(~p);
                        return Status::Unsat;
                    } else {
                        next = p;
                        break;
                    }
                }
                if (next == kUndefLit) {
                    next = pickBranch();
                    if (next == kUndefLit) return Status::Sat;
                }
                newDecisionLevel();
                uncheckedEnqueue(next, kNoReason);
            }
        }
    }
};

Solver::Solver() : impl_(std::make_unique<Impl>()) {}
Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

Var Solver::newVar(bool preferTrue) {
    auto& s = *impl_;
    Var v = static_cast<Var>(s.assigns.size());
    s.assigns.push_back(LBool::Undef);
    s.level.push_back(0);
    s.reason.push_back(kNoReason);
    s.activity.push_back(0.0);
    s.polarity.push_back(!preferTrue);
    s.seen.push_back(0);
    s.watches.emplace_back();
    s.watches.emplace_back();
    s.heap.insert(v);
    return v;
}

int Solver::numVars() const { return static_cast<int>(impl_->assigns.size()); }
std::size_t Solver::numClauses() const { return impl_->liveClauses; }

bool Solver::addClause(std::span<const Lit> input) {
    auto& s = *impl_;
    if (!s.ok) return false;
    assert(s.decisionLevel() == 0);
    std::vector<Lit> lits(input.begin(), input.end());
    std::sort(lits.begin(), lits.end());
    std::vector<Lit> out;
    Lit prev = kUndefLit;
    for (Lit l : lits) {
        assert(l.var() < numVars());
        if (s.value(l) == LBool::True || l == ~prev) return true;
        if (s.value(l) != LBool::False && l != prev) {
            out.push_back(l);
            prev = l;
        }
    }
    if (out.empty()) {
        s.ok = false;
        return false;
    }
    if (out.size() == 1) {
        s.uncheckedEnqueue(out[0], kNoReason);
        s.ok = (s.propagate() == kNoReason);
        return s.ok;
    }
    CRef cr = s.allocClause(std::move(out), false);
    s.attach(cr);
    return true;
}

Status Solver::solve(std::span<const Lit> assumptions) {
    auto& s = *impl_;
    ++s.stats.solves;
    s.modelVals.clear();
    s.conflictSet.clear();
    if (!s.ok) return Status::Unsat;
    s.assumptions.assign(assumptions.begin(), assumptions.end());
    s.maxLearnts = std::max(static_cast<double>(s.liveClauses) / 3.0, 2000.0);
    std::int64_t budgetLeft = s.conflictBudget < 0 ? -1 : s.conflictBudget;

    Status status = Status::Unknown;
    int restarts = 0;
    for (;;) {
        const int limit = static_cast<int>(luby(2, restarts) * 100);
        status = s.search(limit, budgetLeft);
        if (status != Status::Unknown) break;
        if (budgetLeft == 0) break;
        ++restarts;
        ++s.stats.restarts;
        s.maxLearnts *= 1.1;
        s.cancelUntil(0);
    }

    if (status == Status::Sat) {
        s.modelVals = s.assigns;
    } else if (status == Status::Unsat) {
        if (s.conflictSet.empty() && s.decisionLevel() == 0) s.ok = false;
        // conflictSet holds negations of failed assumptions; flip them back
        for (auto& l : s.conflictSet) l = ~l;
    }
    s.cancelUntil(0);
    return status;
}

bool Solver::modelValue(Var v) const { return impl_->modelVals.at(v) == LBool::True; }
const std::vector<LBool>& Solver::model() const { return impl_->modelVals; }
const std::vector<Lit>& Solver::failedAssumptions() const { return impl_->conflictSet; }
void Solver::setConflictBudget(std::int64_t conflicts) { impl_->conflictBudget = conflicts; }
void Solver::setPreferredPhase(Var v, bool value) { impl_->polarity[v] = !value; }
bool Solver::okay() const { return impl_->ok; }
const SolverStats& Solver::stats() const { return impl_->stats; }

}  // namespace cfgloc::sat
