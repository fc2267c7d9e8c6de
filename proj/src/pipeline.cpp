#include "cfgloc/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "cfgloc/error.hpp"
#include "cfgloc/fail/failures.hpp"

namespace cfgloc {

report::Entry entryFor(const enc::ConfigVar& v) {
    report::Entry e;
    e.key = v.key;
    e.router = v.router;
    e.kind = enc::kindName(v.kind);
    e.absent = v.absent;
    e.spans = v.spans;
    e.site = v.site;
    e.suggestion = v.suggestion;
    e.sites = v.sites;
    return e;
}

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    report::RequirementResult result;
    std::vector<report::Mcs> mcses;
    std::uint64_t checks = 0;
    std::string dump, log;
};

Outcome analyse(const net::Network& network, const req::Requirement& requirement, const LocalizeOptions& options,
                Clock::time_point deadline) {
    Outcome o;
    auto& res = o.result;
    res.id = requirement.id;
    res.kind = req::kindName(requirement.kind);
    res.src = requirement.src;
    res.dst = requirement.dst;
    auto remaining = [&] {
        if (options.timeBudgetSeconds < 0) return -1.0;
        return std::max(0.0, std::chrono::duration<double>(deadline - Clock::now()).count());
    };
    try {
        enc::EncodeOptions eo;
        eo.maxFailuresOverride = options.maxFailuresOverride;
        auto cs = enc::encode(network, requirement, eo);
        res.maxFailures = cs.maxFailures;
        if (options.dump) {
            std::ostringstream d;
            d << "# requirement " << requirement.id << "\n";
            cs.dump(d);
            o.dump = d.str();
        }

        std::ostringstream log;
        fail::EnumerateOptions fo;
        fo.dedup = options.dedupScenarios;
        fo.timeBudgetSeconds = remaining();
        fo.log = options.scenarioLog ? &log : nullptr;
        auto scenarios = fail::enumerateViolations(cs, fo);
        o.log = log.str();
        res.violated = !scenarios.scenarios.empty();
        res.complete = scenarios.complete;

        for (const auto& s : scenarios.scenarios) {
            report::ScenarioSummary sum;
            sum.id = s.id;
            for (int li : s.failedLinks) sum.failedLinks.push_back(cs.links[li].name());
            sum.members = s.members.size();
            std::ostringstream hex;
            hex << std::hex << s.fingerprintHash;
            sum.fingerprint = hex.str();
            res.scenarios.push_back(std::move(sum));

            auto pins = fail::pinScenario(cs, s);
            mcs::Problem p{cs.system.get(), cs.hardLabels(), cs.config};
            p.hard.insert(p.hard.end(), pins.begin(), pins.end());
            mcs::EnumerateOptions mo;
            mo.timeBudgetSeconds = remaining();
            mo.maximalSeeds = options.maximalSeeds;
            mo.grow = options.mss;
            auto found = mcs::enumerateMcses(p, mo);
            if (!found.complete) res.complete = false;
            for (const auto& labels : found.mcses) {
                if (options.certify && !mcs::verifyMcs(p, labels))
                    throw InternalError("MCS failed certification for requirement " + requirement.id);
                report::Mcs m;
                m.requirement = requirement.id;
                m.scenario = s.id;
                for (auto id : labels) {
                    const auto* v = cs.varForLabel(id);
                    if (!v) throw InternalError("correction set contains a non-configuration constraint");
                    m.entries.push_back(entryFor(*v));
                }
                o.mcses.push_back(std::move(m));
            }
        }
        o.checks = cs.system->checkCount();
    } catch (const SolverTimeout&) {
        res.complete = false;
    } catch (const Error& e) {
        res.error = e.what();
    }
    return o;
}

}  // namespace

LocalizeResult localize(const net::Network& network, const std::vector<req::Requirement>& requirements,
                        const LocalizeOptions& options) {
    const auto start = Clock::now();
    const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                      std::chrono::duration<double>(std::max(0.0, options.timeBudgetSeconds)));
    std::vector<Outcome> outcomes(requirements.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next++) < requirements.size();)
            outcomes[i] = analyse(network, requirements[i], options, deadline);
    };
    unsigned n = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    n = static_cast<unsigned>(std::min<std::size_t>(n, requirements.size()));
    if (n <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    LocalizeResult out;
    std::vector<report::RequirementResult> results;
    for (auto& o : outcomes) {
        if (options.dump) *options.dump << o.dump;
        if (options.scenarioLog) *options.scenarioLog << o.log;
        results.push_back(std::move(o.result));
        out.mcses.insert(out.mcses.end(), o.mcses.begin(), o.mcses.end());
        out.checks += o.checks;
    }
    out.report = report::aggregate(std::move(results), out.mcses, options.rankMode);
    out.wallMs = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    return out;
}

}  // namespace cfgloc
