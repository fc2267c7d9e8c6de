#include "cfgloc/req/requirements.hpp"

#include <set>

#include <json.hpp>

#include "cfgloc/error.hpp"

namespace cfgloc::req {

using json = nlohmann::json;

const char* kindName(Kind k) { return k == Kind::Reachable ? "reachable" : "blocked"; }

TrafficClass trafficClass(const Requirement& r, const net::Topology& topo) {
    const net::Subnet* s = topo.subnet(r.src);
    const net::Subnet* d = topo.subnet(r.dst);
    if (!s || !d) throw SemanticError("requirement " + r.id + ": unknown subnet");
    return TrafficClass{s->prefix, d->prefix};
}

namespace {

std::vector<std::string> names(const json& j, const std::string& id, const char* field) {
    std::vector<std::string> out;
    if (j.is_string()) {
        out.push_back(j.get<std::string>());
    } else if (j.is_array()) {
        for (const auto& x : j) out.push_back(x.get<std::string>());
    } else {
        throw SemanticError("requirement " + id + ": '" + field + "' must be a subnet name or a list of names");
    }
    return out;
}

}  // namespace

std::vector<Requirement> parseRequirements(std::string_view doc, const net::Topology& topo) {
    json j;
    try {
        j = json::parse(doc);
    } catch (const json::parse_error& e) {
        throw ParseError("<requirements>", 1, static_cast<int>(e.byte), e.what());
    }
    if (!j.is_array()) throw SemanticError("requirements: expected a JSON array");
    std::vector<Requirement> out;
    std::set<std::string> ids;
    for (const auto& e : j) {
        std::string id = e.value("id", "");
        if (id.empty()) throw SemanticError("requirements: entry without an id");
        std::string kind = e.value("kind", "");
        Kind k;
        if (kind == "reachable")
            k = Kind::Reachable;
        else if (kind == "blocked")
            k = Kind::Blocked;
        else
            throw SemanticError("requirement " + id + ": kind must be 'reachable' or 'blocked'");
        int maxFailures = e.value("maxFailures", 0);
        if (maxFailures < 0) throw SemanticError("requirement " + id + ": maxFailures must be non-negative");
        if (maxFailures > static_cast<int>(topo.links.size()))
            throw SemanticError("requirement " + id + ": maxFailures " + std::to_string(maxFailures) +
                                " exceeds the number of links (" + std::to_string(topo.links.size()) + ")");
        auto srcs = names(e.value("src", json()), id, "src");
        auto dsts = names(e.value("dst", json()), id, "dst");
        bool expand = e.value("src", json()).is_array() || e.value("dst", json()).is_array();
        for (const auto& s : srcs) {
            for (const auto& d : dsts) {
                for (const auto& n : {s, d})
                    if (!topo.subnet(n)) throw SemanticError("requirement " + id + ": unknown subnet '" + n + "'");
                if (s == d) {
                    if (expand) continue;
                    throw SemanticError("requirement " + id + ": source and destination are the same subnet");
                }
                Requirement r{expand ? id + ":" + s + "->" + d : id, k, s, d, maxFailures};
                if (!ids.insert(r.id).second) throw SemanticError("duplicate requirement id '" + r.id + "'");
                out.push_back(std::move(r));
            }
        }
    }
    return out;
}

}  // namespace cfgloc::req
