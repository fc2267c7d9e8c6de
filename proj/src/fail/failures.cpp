#include "cfgloc/fail/failures.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "cfgloc/error.hpp"

namespace cfgloc::fail {

using smt::Category;
using smt::LabelId;
using smt::Term;

std::string Scenario::describe(const enc::ConstraintSystem& cs) const {
    std::string out = "{";
    for (std::size_t i = 0; i < failedLinks.size(); ++i)
        out += (i ? "," : "") + cs.links[failedLinks[i]].name();
    return out + "}";
}

std::string fingerprint(const enc::ConstraintSystem& cs, const smt::Model& model) {
    std::string out = model.boolean(cs.reachSource) ? "S+" : "S-";
    std::set<std::string> seen;
    std::string r = cs.srcRouter;
    while (!r.empty() && seen.insert(r).second) {
        std::string next;
        out += ";" + r + ":";
        for (const auto& [key, var] : cs.ribNext) {
            if (key.first != r || !model.boolean(var)) continue;
            out += "rib=" + key.second;
            if (key.second != "T") next = key.second;
        }
        for (const auto& [key, var] : cs.fwdVars)
            if (key.first == r && model.boolean(var)) out += ",fwd=" + key.second;
        out += model.boolean(cs.reachVars.at(r)) ? ",reach" : ",drop";
        r = next;
    }
    return out;
}

Enumeration enumerateViolations(enc::ConstraintSystem& cs, const EnumerateOptions& options) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    auto& sys = *cs.system;
    auto& tm = sys.terms();

    std::vector<LabelId> assumptions = cs.config;
    assumptions.insert(assumptions.end(), cs.logic.begin(), cs.logic.end());
    assumptions.push_back(cs.negatedRequirement);

    Enumeration out;
    std::map<std::string, std::size_t> byFingerprint;
    for (;;) {
        if (options.timeBudgetSeconds >= 0 &&
            std::chrono::duration<double>(Clock::now() - start).count() > options.timeBudgetSeconds) {
            out.complete = false;
            break;
        }
        auto r = sys.check(assumptions);
        if (r.status == smt::CheckStatus::Timeout) {
            out.complete = false;
            break;
        }
        if (r.status == smt::CheckStatus::Unsat) break;
        ++out.iterations;

        std::vector<int> failed;
        std::vector<Term> differ;
        for (std::size_t i = 0; i < cs.failVars.size(); ++i) {
            bool v = r.model.boolean(cs.failVars[i]);
            if (v) failed.push_back(static_cast<int>(i));
            differ.push_back(v ? tm.mkNot(cs.failVars[i]) : cs.failVars[i]);
        }
        Scenario s;
        s.failedLinks = failed;
        s.srcAddr = static_cast<std::uint32_t>(r.model.get(cs.srcAddr));
        s.dstAddr = static_cast<std::uint32_t>(r.model.get(cs.dstAddr));
        s.fingerprint = fingerprint(cs, r.model);
        s.fingerprintHash = std::hash<std::string>{}(s.fingerprint);
        s.members = {failed};

        if (options.log) {
            nlohmann::json line{{"requirement", cs.requirement.id},
                                {"failedLinks", nlohmann::json::array()},
                                {"fingerprint", s.fingerprintHash}};
            for (int li : failed) line["failedLinks"].push_back(cs.links[li].name());
            *options.log << line.dump() << "\n";
        }

        auto it = byFingerprint.find(s.fingerprint);
        if (options.dedup && it != byFingerprint.end()) {
            out.scenarios[it->second].members.push_back(failed);
        } else {
            s.id = static_cast<int>(out.scenarios.size());
            byFingerprint.emplace(s.fingerprint, out.scenarios.size());
            out.scenarios.push_back(std::move(s));
        }

        if (cs.failVars.empty()) break;
        assumptions.push_back(sys.add(tm.mkOr(differ), Category::Logic, "block " + std::to_string(out.iterations)));
    }
    return out;
}

std::vector<LabelId> pinScenario(enc::ConstraintSystem& cs, const Scenario& scenario) {
    auto& sys = *cs.system;
    auto& tm = sys.terms();
    std::set<int> failed(scenario.failedLinks.begin(), scenario.failedLinks.end());
    std::vector<LabelId> pins;
    for (std::size_t i = 0; i < cs.failVars.size(); ++i) {
        Term v = cs.failVars[i];
        bool f = failed.count(static_cast<int>(i)) != 0;
        pins.push_back(sys.add(f ? v : tm.mkNot(v), Category::FailurePin,
                               cs.links[i].name() + (f ? " failed" : " up")));
    }
    Term packet = tm.mkAnd({tm.mkEq(cs.srcAddr, tm.intConst(scenario.srcAddr, 32)),
                            tm.mkEq(cs.dstAddr, tm.intConst(scenario.dstAddr, 32))});
    pins.push_back(sys.add(packet, Category::FailurePin, "packet"));

    auto all = cs.hardLabels();
    all.insert(all.end(), cs.config.begin(), cs.config.end());
    all.insert(all.end(), pins.begin(), pins.end());
    auto r = sys.check(all);
    if (r.status == smt::CheckStatus::Timeout) throw SolverTimeout("pinning scenario " + scenario.describe(cs));
    if (r.status == smt::CheckStatus::Sat)
        throw InternalError("scenario " + scenario.describe(cs) + " of requirement " + cs.requirement.id +
                            " is satisfiable once pinned");
    return pins;
}

}  // namespace cfgloc::fail
