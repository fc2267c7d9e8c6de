#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cfgloc/harness/generate.hpp"
#include "cfgloc/harness/inject.hpp"
#include "cfgloc/harness/score.hpp"
#include "cfgloc/mcs/mcs.hpp"
#include "cfgloc/report/report.hpp"

namespace cfgloc::harness {

struct BenchOptions {
    double timeBudgetSeconds = 600;  // per trial
    int maxAttempts = 50;            // injections tried before giving up on a trial
    unsigned threads = 0;
    mcs::MssStrategy mss = mcs::MssStrategy::Bisect;
    std::vector<report::RankMode> modes{report::RankMode::Smallest, report::RankMode::ThreeSmallest,
                                        report::RankMode::Intersect, report::RankMode::All};
};

struct Trial {
    std::string network;
    int size = 0;
    ErrorType type = ErrorType::OmitNw;
    std::uint64_t seed = 0;        // trial seed
    std::uint64_t injectSeed = 0;  // seed of the injection that was localized
    int attempts = 0;
    bool violated = false;  // false: no attempt produced a violation, nothing scored
    InjectedError error;
    std::map<report::RankMode, Score> scores;
    bool complete = true;
    std::uint64_t checks = 0;
    double wallMs = 0;
};

// Injection seeds derived from a trial seed, in the order they are tried.
std::vector<std::uint64_t> injectionSeeds(std::uint64_t seed, int count);

// Injects errors of one type, drawing derived seeds until the simulator shows
// a requirement violation, then localizes once and scores every rank mode.
Trial runTrial(const Generated& generated, ErrorType type, std::uint64_t seed, const BenchOptions& options);

struct SuiteOptions {
    std::vector<int> ringSizes{8};
    int treeLevels = 3;
    std::vector<std::uint64_t> seeds{1, 2, 3};
};

// table2 (the injection suite): OmitNw and OmitNb on ring(n) for each size and on the tree;
// OmitAcl, OmitAclRule and ExtraAcl on the campus network.
std::vector<Trial> runSuite(const std::string& suite, const SuiteOptions& suiteOptions, const BenchOptions& options,
                            const std::function<void(const Trial&)>& onTrial = {});

// One row per trial and rank mode.
void writeCsvHeader(std::ostream& out);
void writeCsv(std::ostream& out, const Trial& trial);

}  // namespace cfgloc::harness
