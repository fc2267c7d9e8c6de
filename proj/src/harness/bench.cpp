#include "cfgloc/harness/bench.hpp"

#include <ostream>

#include "cfgloc/error.hpp"
#include "cfgloc/harness/rng.hpp"
#include "cfgloc/harness/simulate.hpp"
#include "cfgloc/pipeline.hpp"

namespace cfgloc::harness {

std::vector<std::uint64_t> injectionSeeds(std::uint64_t seed, int count) {
    std::vector<std::uint64_t> out;
    std::uint64_t state = seed;
    for (int i = 0; i < count; ++i) out.push_back(splitmix64(state));
    return out;
}

Trial runTrial(const Generated& generated, ErrorType type, std::uint64_t seed, const BenchOptions& options) {
    Trial t;
    t.network = generated.kind;
    t.size = generated.size;
    t.type = type;
    t.seed = seed;
    net::Network base = generated.network();
    auto requirements = generated.parsedRequirements(base.topology);

    for (auto s : injectionSeeds(seed, options.maxAttempts)) {
        ++t.attempts;
        Injection inj = inject(base, type, s);
        if (simulatedViolations(inj.network, requirements).empty()) continue;
        t.violated = true;
        t.injectSeed = s;
        t.error = inj.error;

        LocalizeOptions lo;
        lo.timeBudgetSeconds = options.timeBudgetSeconds;
        lo.threads = options.threads;
        lo.mss = options.mss;
        lo.rankMode = report::RankMode::All;
        LocalizeResult res = localize(inj.network, requirements, lo);
        t.complete = res.report.complete();
        t.checks = res.checks;
        t.wallMs = res.wallMs;
        for (auto mode : options.modes) {
            report::Report r = report::aggregate(res.report.requirements, res.mcses, mode);
            t.scores[mode] = score(r, {t.error});
        }
        break;
    }
    return t;
}

std::vector<Trial> runSuite(const std::string& suite, const SuiteOptions& so, const BenchOptions& options,
                            const std::function<void(const Trial&)>& onTrial) {
    if (suite != "table2") throw Error("unknown suite '" + suite + "' (expected table2)");
    std::vector<std::pair<Generated, std::vector<ErrorType>>> plan;
    const std::vector<ErrorType> routing{ErrorType::OmitNw, ErrorType::OmitNb};
    for (int n : so.ringSizes) plan.emplace_back(generateRing(n), routing);
    plan.emplace_back(generateTree(so.treeLevels), routing);
    plan.emplace_back(generateCampus(),
                      std::vector<ErrorType>{ErrorType::OmitAcl, ErrorType::OmitAclRule, ErrorType::ExtraAcl});
    std::vector<Trial> out;
    for (const auto& [g, types] : plan)
        for (auto type : types)
            for (auto seed : so.seeds) {
                out.push_back(runTrial(g, type, seed, options));
                if (onTrial) onTrial(out.back());
            }
    return out;
}

void writeCsvHeader(std::ostream& out) {
    out << "errorType,network,size,seed,injectSeed,rankMode,precision,recall,checks,wallMs,complete\n";
}

void writeCsv(std::ostream& out, const Trial& t) {
    auto prefix = [&] {
        out << errorTypeName(t.type) << ',' << t.network << ',' << t.size << ',' << t.seed << ',';
    };
    if (!t.violated) {
        prefix();
        out << ",none,n/a,n/a,0,0,false\n";
        return;
    }
    for (const auto& [mode, s] : t.scores) {
        prefix();
        out << t.injectSeed << ',' << report::rankModeName(mode) << ',';
        if (s.precision)
            out << *s.precision;
        else
            out << "n/a";
        out << ',' << s.recall << ',' << t.checks << ',' << t.wallMs << ',' << (t.complete ? "true" : "false")
            << '\n';
    }
}

}  // namespace cfgloc::harness
