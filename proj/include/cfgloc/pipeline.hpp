#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "cfgloc/enc/encoder.hpp"
#include "cfgloc/mcs/mcs.hpp"
#include "cfgloc/net/model.hpp"
#include "cfgloc/report/report.hpp"
#include "cfgloc/req/requirements.hpp"

namespace cfgloc {

struct LocalizeOptions {
    int maxFailuresOverride = -1;
    double timeBudgetSeconds = 600;  // whole run, shared by all requirements
    report::RankMode rankMode = report::RankMode::Smallest;
    bool dedupScenarios = true;
    mcs::MssStrategy mss = mcs::MssStrategy::Bisect;
    bool maximalSeeds = true;
    bool certify = true;  // re-check every MCS before reporting it
    unsigned threads = 0;  // 0: one per hardware thread
    std::ostream* scenarioLog = nullptr;
    std::ostream* dump = nullptr;  // constraint systems, one per requirement
};

struct LocalizeResult {
    report::Report report;
    std::vector<report::Mcs> mcses;  // every certified MCS before ranking
    std::uint64_t checks = 0;
    double wallMs = 0;
};

report::Entry entryFor(const enc::ConfigVar& v);

// Encodes each requirement, enumerates its violating failure classes and the
// configuration MCSes of each class, then aggregates them into one report.
// Requirements are analysed concurrently.
LocalizeResult localize(const net::Network& network, const std::vector<req::Requirement>& requirements,
                        const LocalizeOptions& options = {});

}  // namespace cfgloc
