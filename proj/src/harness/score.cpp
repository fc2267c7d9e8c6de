#include "cfgloc/harness/score.hpp"

#include <algorithm>
#include <map>

namespace cfgloc::harness {

namespace {

bool names(const report::Entry& e, const GroundTruthItem& item) {
    return std::any_of(e.sites.begin(), e.sites.end(), [&](const std::string& s) {
        return std::find(item.sites.begin(), item.sites.end(), s) != item.sites.end();
    });
}

}  // namespace

Score score(const report::Report& report, const std::vector<InjectedError>& truth) {
    std::map<std::string, const report::Entry*> flagged;
    for (const auto& f : report.findings)
        for (const auto& e : f.entries) flagged.emplace(e.key, &e);
    std::vector<const GroundTruthItem*> items;
    for (const auto& t : truth)
        for (const auto& i : t.items) items.push_back(&i);

    Score s;
    s.flagged = flagged.size();
    s.items = items.size();
    for (const auto& [key, e] : flagged)
        if (std::any_of(items.begin(), items.end(), [&](const auto* i) { return names(*e, *i); })) ++s.flaggedHits;
    for (const auto* i : items)
        if (std::any_of(flagged.begin(), flagged.end(), [&](const auto& kv) { return names(*kv.second, *i); }))
            ++s.itemsHit;
    if (s.flagged > 0) s.precision = static_cast<double>(s.flaggedHits) / static_cast<double>(s.flagged);
    s.recall = s.items == 0 ? 1.0 : static_cast<double>(s.itemsHit) / static_cast<double>(s.items);
    return s;
}

}  // namespace cfgloc::harness
