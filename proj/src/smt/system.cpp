#include "cfgloc/smt/system.hpp"

#include <algorithm>
#include <ostream>

#include "cfgloc/error.hpp"

namespace cfgloc::smt {

const char* categoryName(Category c) {
    switch (c) {
        case Category::Config: return "C";
        case Category::Logic: return "L";
        case Category::Requirement: return "R";
        case Category::FailurePin: return "F";
    }
    return "?";
}

sat::Var System::Sink::newVar() {
    sat::Var v = s_.solver_.newVar();
    if (s_.recording_) s_.recorded_.numVars = v + 1;
    return v;
}

void System::Sink::addClause(std::span<const Lit> lits) {
    if (s_.recording_) s_.recorded_.clauses.emplace_back(lits.begin(), lits.end());
    s_.solver_.addClause(lits);
}

System::System(bool recordClauses) : recording_(recordClauses), sink_(*this), blaster_(tm_, sink_) {}

void System::assertLabeled(Term formula, Label label) {
    if (!tm_.isBool(formula)) throw InternalError("labeled formula must be boolean");
    if (byId_.count(label.id)) throw InternalError("duplicate label id " + std::to_string(label.id));
    Lit f = blaster_.lowerBool(formula);
    Lit act = Lit::make(sink_.newVar());
    Lit cl[2] = {~act, f};
    sink_.addClause(cl);
    byId_[label.id] = labels_.size();
    byActVar_[act.var()] = label.id;
    nextId_ = std::max(nextId_, label.id + 1);
    labels_.push_back(Entry{std::move(label), formula, act});
}

LabelId System::add(Term formula, Category category, std::string meta) {
    LabelId id = nextId_;
    assertLabeled(formula, Label{id, category, std::move(meta)});
    return id;
}

void System::assertHard(Term formula) {
    Lit f = blaster_.lowerBool(formula);
    sink_.addClause(std::span<const Lit>(&f, 1));
}

sat::Lit System::literal(Term boolTerm) { return blaster_.lowerBool(boolTerm); }

CheckResult System::check(std::span<const LabelId> assumptions) {
    ++checks_;
    std::vector<Lit> assume;
    assume.reserve(assumptions.size());
    for (LabelId id : assumptions) {
        auto it = byId_.find(id);
        if (it == byId_.end()) throw InternalError("check: unknown label " + std::to_string(id));
        assume.push_back(labels_[it->second].act);
    }
    CheckResult r;
    switch (solver_.solve(assume)) {
        case sat::Status::Sat: {
            r.status = CheckStatus::Sat;
            for (Term v : tm_.variables()) {
                std::uint64_t value = 0;
                if (blaster_.lowered(v)) {
                    if (tm_.isBool(v)) {
                        value = solver_.modelValue(blaster_.boolVarLit(v)) ? 1 : 0;
                    } else {
                        const auto& bits = blaster_.intVarBits(v);
                        for (std::size_t i = 0; i < bits.size(); ++i)
                            if (solver_.modelValue(bits[i])) value |= 1ull << i;
                    }
                }
                r.model.set(v, value);
            }
            break;
        }
        case sat::Status::Unsat:
            r.status = CheckStatus::Unsat;
            for (Lit l : solver_.failedAssumptions()) r.core.push_back(byActVar_.at(l.var()));
            std::sort(r.core.begin(), r.core.end());
            r.core.erase(std::unique(r.core.begin(), r.core.end()), r.core.end());
            break;
        case sat::Status::Unknown: r.status = CheckStatus::Timeout; break;
    }
    return r;
}

bool System::satisfiable(std::span<const LabelId> assumptions) {
    auto r = check(assumptions);
    if (r.status == CheckStatus::Timeout) throw SolverTimeout("solver conflict budget exhausted");
    return r.status == CheckStatus::Sat;
}

std::vector<LabelId> System::labels(Category c) const {
    std::vector<LabelId> out;
    for (const auto& e : labels_)
        if (e.label.category == c) out.push_back(e.label.id);
    return out;
}

std::vector<LabelId> System::allLabels() const {
    std::vector<LabelId> out;
    for (const auto& e : labels_) out.push_back(e.label.id);
    return out;
}

void System::writeDimacs(std::ostream& out) const {
    if (!recording_) throw InternalError("clause recording was not enabled");
    out << "c activation literals:";
    for (const auto& e : labels_) out << ' ' << e.label.id << '=' << (e.act.var() + 1);
    out << '\n';
    smt::writeDimacs(out, recorded_);
}

void System::writeText(std::ostream& out) const {
    for (const auto& e : labels_) {
        out << e.label.id << '\t' << categoryName(e.label.category) << '\t' << e.label.meta << '\t'
            << tm_.toString(e.formula) << '\n';
    }
}

}  // namespace cfgloc::smt
