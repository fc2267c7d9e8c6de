#include "cfgloc/report/report.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include <json.hpp>

namespace cfgloc::report {

using json = nlohmann::ordered_json;

const char* rankModeName(RankMode m) {
    switch (m) {
        case RankMode::Smallest: return "smallest";
        case RankMode::ThreeSmallest: return "three";
        case RankMode::Intersect: return "intersect";
        case RankMode::All: return "all";
    }
    return "?";
}

std::optional<RankMode> parseRankMode(const std::string& s) {
    if (s == "smallest") return RankMode::Smallest;
    if (s == "three") return RankMode::ThreeSmallest;
    if (s == "intersect") return RankMode::Intersect;
    if (s == "all") return RankMode::All;
    return std::nullopt;
}

bool Report::violated() const {
    return std::any_of(requirements.begin(), requirements.end(), [](auto& r) { return r.violated; });
}

bool Report::complete() const {
    return std::all_of(requirements.begin(), requirements.end(), [](auto& r) { return r.complete; });
}

std::string Report::status() const {
    if (std::any_of(requirements.begin(), requirements.end(), [](auto& r) { return !r.error.empty(); }))
        return "error";
    return violated() ? "violated" : "compliant";
}

namespace {

auto entryOrder(const Entry& e) {
    std::string file = e.spans.empty() ? std::string() : e.spans.front().file;
    int line = e.spans.empty() ? 0 : e.spans.front().firstLine;
    return std::make_tuple(e.router, file, line, e.key);
}

bool entryLess(const Entry& a, const Entry& b) { return entryOrder(a) < entryOrder(b); }

}  // namespace

Report aggregate(std::vector<RequirementResult> requirements, const std::vector<Mcs>& mcses, RankMode mode) {
    Report rep;
    rep.mode = mode;
    rep.requirements = std::move(requirements);

    struct Group {
        std::vector<Entry> entries;
        std::set<std::string> requirements;
        std::set<std::string> scenarios;
    };
    std::map<std::vector<std::string>, Group> groups;
    for (const auto& m : mcses) {
        std::vector<std::string> keys;
        for (const auto& e : m.entries) keys.push_back(e.key);
        std::sort(keys.begin(), keys.end());
        auto& g = groups[keys];
        if (g.entries.empty()) {
            g.entries = m.entries;
            std::sort(g.entries.begin(), g.entries.end(), entryLess);
        }
        g.requirements.insert(m.requirement);
        g.scenarios.insert(m.requirement + "#" + std::to_string(m.scenario));
    }

    std::vector<const Group*> kept;
    for (const auto& [keys, g] : groups) kept.push_back(&g);

    std::set<std::size_t> sizes;
    for (const auto* g : kept) sizes.insert(g->entries.size());
    RankMode effective = mode;
    std::set<std::string> violated;
    for (const auto& r : rep.requirements)
        if (r.violated) violated.insert(r.id);
    if (mode == RankMode::Intersect && violated.size() < 2) {
        rep.warnings.push_back("intersect ranking needs at least two violated requirements; reporting all MCSes");
        effective = RankMode::All;
    }
    auto keep = [&](auto pred) {
        std::vector<const Group*> out;
        for (const auto* g : kept)
            if (pred(*g)) out.push_back(g);
        kept = std::move(out);
    };
    switch (effective) {
        case RankMode::Smallest:
            if (!sizes.empty()) keep([&](const Group& g) { return g.entries.size() == *sizes.begin(); });
            break;
        case RankMode::ThreeSmallest: {
            std::set<std::size_t> three;
            for (auto s : sizes)
                if (three.size() < 3) three.insert(s);
            keep([&](const Group& g) { return three.count(g.entries.size()) != 0; });
            break;
        }
        case RankMode::Intersect:
            keep([&](const Group& g) {
                return std::includes(g.requirements.begin(), g.requirements.end(), violated.begin(), violated.end());
            });
            if (kept.empty() && !groups.empty())
                rep.warnings.push_back("no MCS is common to every violated requirement");
            break;
        case RankMode::All: break;
    }

    std::stable_sort(kept.begin(), kept.end(), [](const Group* a, const Group* b) {
        if (a->entries.size() != b->entries.size()) return a->entries.size() < b->entries.size();
        return std::lexicographical_compare(a->entries.begin(), a->entries.end(), b->entries.begin(),
                                            b->entries.end(), entryLess);
    });
    for (const auto* g : kept) {
        Finding f;
        f.rank = static_cast<int>(rep.findings.size()) + 1;
        f.entries = g->entries;
        f.requirements.assign(g->requirements.begin(), g->requirements.end());
        f.scenarios.assign(g->scenarios.begin(), g->scenarios.end());
        rep.findings.push_back(std::move(f));
    }
    return rep;
}

namespace {

json spanJson(const net::Span& s) { return json{{"file", s.file}, {"firstLine", s.firstLine}, {"lastLine", s.lastLine}}; }

json entryJson(const Entry& e) {
    if (e.absent)
        return json{{"type", "absent"}, {"router", e.router}, {"kind", e.kind}, {"site", e.site},
                    {"suggestion", e.suggestion}};
    json spans = json::array();
    for (const auto& s : e.spans) spans.push_back(spanJson(s));
    return json{{"type", "present"}, {"router", e.router}, {"kind", e.kind}, {"site", e.site}, {"spans", spans}};
}

}  // namespace

void writeJson(std::ostream& out, const Report& report) {
    json j;
    j["version"] = 1;
    j["status"] = report.status();
    j["rankMode"] = rankModeName(report.mode);
    j["complete"] = report.complete();
    j["warnings"] = report.warnings;
    j["requirements"] = json::array();
    for (const auto& r : report.requirements) {
        json rj{{"id", r.id}, {"kind", r.kind}, {"src", r.src}, {"dst", r.dst}, {"maxFailures", r.maxFailures},
                {"violated", r.violated}, {"complete", r.complete}, {"scenarios", json::array()}};
        for (const auto& s : r.scenarios)
            rj["scenarios"].push_back(json{{"id", s.id}, {"failedLinks", s.failedLinks}, {"members", s.members},
                                           {"fingerprint", s.fingerprint}});
        if (!r.error.empty()) rj["error"] = r.error;
        j["requirements"].push_back(std::move(rj));
    }
    j["findings"] = json::array();
    for (const auto& f : report.findings) {
        json fj{{"rank", f.rank}, {"mcsSize", f.size()}, {"entries", json::array()}, {"spans", json::array()},
                {"omissions", json::array()}};
        for (const auto& e : f.entries) {
            fj["entries"].push_back(entryJson(e));
            if (e.absent)
                fj["omissions"].push_back(entryJson(e));
            else
                for (const auto& s : e.spans) fj["spans"].push_back(spanJson(s));
        }
        fj["requirements"] = f.requirements;
        fj["scenarios"] = f.scenarios;
        j["findings"].push_back(std::move(fj));
    }
    out << j.dump(2) << "\n";
}

void writeText(std::ostream& out, const Report& report, const Sources* sources) {
    for (const auto& r : report.requirements) {
        out << "requirement " << r.id << " (" << r.kind << " " << r.src << " -> " << r.dst << ", k=" << r.maxFailures
            << "): ";
        if (!r.error.empty()) {
            out << "error: " << r.error << "\n";
            continue;
        }
        out << (r.violated ? "violated" : "holds") << (r.complete ? "" : " (search incomplete)") << "\n";
        for (const auto& s : r.scenarios) {
            out << "  scenario " << s.id << ": failed {";
            for (std::size_t i = 0; i < s.failedLinks.size(); ++i) out << (i ? ", " : "") << s.failedLinks[i];
            out << "}";
            if (s.members > 1) out << " and " << s.members - 1 << " equivalent";
            out << "\n";
        }
    }
    for (const auto& w : report.warnings) out << "warning: " << w << "\n";
    if (!report.violated()) {
        out << "status: " << report.status() << "\n";
        return;
    }
    out << "\n" << report.findings.size() << " finding(s), rank mode " << rankModeName(report.mode) << "\n";
    for (const auto& f : report.findings) {
        out << "\n#" << f.rank << " (" << f.size() << " change" << (f.size() == 1 ? "" : "s") << ") for";
        for (const auto& r : f.requirements) out << " " << r;
        out << "\n";
        for (const auto& e : f.entries) {
            if (e.absent) {
                out << "  " << e.router << ": missing " << e.kind << " at " << e.site << "; add: " << e.suggestion
                    << "\n";
                continue;
            }
            out << "  " << e.router << ": " << e.kind << " at " << e.site << "\n";
            for (const auto& s : e.spans) {
                out << "    " << s.str() << "\n";
                if (!sources) continue;
                auto it = sources->find(s.file);
                if (it == sources->end()) continue;
                for (int line = s.firstLine; line <= s.lastLine && line <= static_cast<int>(it->second.size()); ++line)
                    out << "      " << line << " | " << it->second[line - 1] << "\n";
            }
        }
    }
    out << "\nstatus: " << report.status() << "\n";
}

}  // namespace cfgloc::report
