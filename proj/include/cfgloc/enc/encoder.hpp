#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "cfgloc/net/model.hpp"
#include "cfgloc/req/requirements.hpp"
#include "cfgloc/smt/system.hpp"

namespace cfgloc::enc {

enum class VarKind {
    OspfAdjacency,
    OspfOriginate,
    OspfCost,
    OspfPassive,
    BgpAdjacency,
    BgpOriginate,
    RouteFilter,
    AclUse,
    InterfaceState,
    L3Adjacency,
    StaticRoute,
};

const char* kindName(VarKind k);

// A symbolic configuration variable. The variable appears in logic
// constraints; its binding is the single configuration constraint that fixes
// it to the configured value (or the default when the statement is absent).
struct ConfigVar {
    VarKind kind;
    std::string router;
    std::string site;  // interface, neighbor, subnet or link, per kind
    std::string key;   // "Kind:router:site", unique within a network
    smt::Term term;
    smt::LabelId binding = -1;
    bool absent = false;
    std::vector<net::Span> spans;   // statements that define the value
    std::string suggestion;         // statement to add when absent
    // Statement identities used to match findings against injected errors,
    // e.g. "r1|iface|eth1|acl-out" or "r1|acl|deptFilter".
    std::vector<std::string> sites;
};

struct Advertisement {
    smt::Term valid;
    smt::Term cost;
};

struct EncodeOptions {
    // Ignore the requirement's budget and use this one instead.
    int maxFailuresOverride = -1;
};

struct ConstraintSystem {
    std::unique_ptr<smt::System> system;
    req::Requirement requirement;
    req::TrafficClass traffic;
    int maxFailures = 0;

    std::vector<ConfigVar> configVars;
    std::map<smt::LabelId, std::size_t> varOfBinding;

    std::vector<smt::LabelId> config;  // C
    std::vector<smt::LabelId> logic;   // L
    smt::LabelId requirementLabel = -1;  // R
    smt::LabelId negatedRequirement = -1;  // R-category toggle used during exploration

    std::vector<net::Link> links;
    std::vector<smt::Term> failVars;  // per link, topology order
    smt::Term srcAddr, dstAddr;

    std::vector<std::string> routers;  // sorted
    // Route choice and forwarding decisions; target is a router name or "T".
    std::map<std::pair<std::string, std::string>, smt::Term> ribNext;
    std::map<std::pair<std::string, std::string>, smt::Term> fwdVars;
    std::map<std::string, smt::Term> reachVars;
    std::string srcRouter, dstRouter;
    smt::Term reachSource;  // the packet enters at S and reaches T

    // Per protocol and router: best route terms.
    std::map<std::string, Advertisement> bestOspf, bestBgp;
    unsigned costWidth = 16;

    // Every variable created by the encoder, by term id.
    std::unordered_set<std::uint32_t> symbols;

    // All labels that stay enabled while correcting configuration: L plus R.
    std::vector<smt::LabelId> hardLabels() const;

    const ConfigVar* varForLabel(smt::LabelId id) const;
    const ConfigVar* var(const std::string& key) const;

    // Human-readable dump: one labeled constraint per line.
    void dump(std::ostream& out) const;
};

ConstraintSystem encode(const net::Network& network, const req::Requirement& requirement,
                        const EncodeOptions& options = {});

// Checks that configuration constants occur only inside their own binding
// and that every variable in the system is a known symbol. Returns the list
// of violations; empty means the system is well separated.
std::vector<std::string> auditSeparation(const ConstraintSystem& cs);

}  // namespace cfgloc::enc
