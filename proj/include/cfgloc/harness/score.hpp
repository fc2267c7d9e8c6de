#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cfgloc/harness/inject.hpp"
#include "cfgloc/report/report.hpp"

namespace cfgloc::harness {

struct Score {
    // Share of flagged configuration entries that name an injected error;
    // unset when the report has no findings.
    std::optional<double> precision;
    // Share of ground-truth items (one per device and error) that some
    // flagged entry names.
    double recall = 0;
    std::size_t flagged = 0, flaggedHits = 0, items = 0, itemsHit = 0;
};

// Entries are distinct configuration variables across all findings; an entry
// names an item when it shares one of the item's sites.
Score score(const report::Report& report, const std::vector<InjectedError>& truth);

}  // namespace cfgloc::harness
