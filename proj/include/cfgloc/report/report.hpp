#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfgloc/net/model.hpp"

namespace cfgloc::report {

enum class RankMode { Smallest, ThreeSmallest, Intersect, All };
const char* rankModeName(RankMode m);
std::optional<RankMode> parseRankMode(const std::string& s);  // smallest|three|intersect|all

// One configuration variable named by an MCS.
struct Entry {
    std::string key;  // unique variable key, identifies the entry across requirements
    std::string router;
    std::string kind;
    bool absent = false;
    std::vector<net::Span> spans;  // present statements
    std::string site;              // absent: where the statement would go
    std::string suggestion;
    std::vector<std::string> sites;  // statement identities for scoring
};

struct Mcs {
    std::string requirement;
    int scenario = 0;
    std::vector<Entry> entries;
};

struct ScenarioSummary {
    int id = 0;
    std::vector<std::string> failedLinks;
    std::size_t members = 1;  // assignments in the class
    std::string fingerprint;
};

struct RequirementResult {
    std::string id;
    std::string kind;
    std::string src, dst;
    int maxFailures = 0;
    bool violated = false;
    bool complete = true;  // scenario and MCS enumeration both finished
    std::vector<ScenarioSummary> scenarios;
    std::string error;  // set when the requirement could not be analysed
};

struct Finding {
    int rank = 0;
    std::vector<Entry> entries;          // sorted by router, file, line
    std::vector<std::string> requirements;
    std::vector<std::string> scenarios;  // "requirement#scenario"
    std::size_t size() const { return entries.size(); }
};

struct Report {
    RankMode mode = RankMode::Smallest;
    std::vector<RequirementResult> requirements;
    std::vector<Finding> findings;
    std::vector<std::string> warnings;

    bool violated() const;
    bool complete() const;
    std::string status() const;  // compliant | violated | error
};

// Deduplicates MCSes by their variable sets, keeps those selected by the rank
// mode and orders them by size, then by (router, file, line).
Report aggregate(std::vector<RequirementResult> requirements, const std::vector<Mcs>& mcses, RankMode mode);

// Source text per file name, used for excerpts in the text output.
using Sources = std::map<std::string, std::vector<std::string>>;

void writeJson(std::ostream& out, const Report& report);
void writeText(std::ostream& out, const Report& report, const Sources* sources = nullptr);

}  // namespace cfgloc::report
