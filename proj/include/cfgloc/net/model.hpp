#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cfgloc/net/prefix.hpp"

namespace cfgloc::net {

// Inclusive line range in one configuration file.
struct Span {
    std::string file;
    int firstLine = 0;
    int lastLine = 0;

    bool valid() const { return firstLine > 0; }
    bool overlaps(const Span& o) const {
        return valid() && o.valid() && file == o.file && firstLine <= o.lastLine && o.firstLine <= lastLine;
    }
    std::string str() const;

    bool operator==(const Span&) const = default;
    auto operator<=>(const Span&) const = default;
};

enum class Severity { Error, Warning };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string message;
    Span span;

    std::string str() const;
};

enum class Action { Permit, Deny };
const char* actionName(Action a);

enum class Direction { In, Out };
const char* directionName(Direction d);

struct AclRule {
    Action action = Action::Deny;
    Prefix src;  // 0.0.0.0/0 stands for `any`
    Prefix dst;
    Span span;
};

struct AclDef {
    std::string name;
    std::vector<AclRule> rules;
    Span span;  // first to last rule

    // First-match evaluation with the implicit trailing deny.
    bool permits(std::uint32_t src, std::uint32_t dst) const;
};

struct Interface {
    std::string name;
    std::optional<Prefix> prefix;  // interface subnet
    std::uint32_t hostAddress = 0;
    bool enabled = true;
    std::optional<int> ospfCost;
    bool ospfPassive = false;
    std::optional<std::string> inAcl;
    std::optional<std::string> outAcl;

    Span span;  // whole stanza
    Span ipSpan, shutdownSpan, costSpan, passiveSpan, inAclSpan, outAclSpan;

    const std::optional<std::string>& acl(Direction d) const { return d == Direction::In ? inAcl : outAcl; }
    const Span& aclSpan(Direction d) const { return d == Direction::In ? inAclSpan : outAclSpan; }
};

struct NetworkStatement {
    Prefix prefix;
    Span span;
};

struct OspfProcess {
    std::vector<NetworkStatement> networks;
    Span span;

    // Statement covering the given interface subnet, if any.
    const NetworkStatement* covering(const Prefix& ifacePrefix) const;
};

struct BgpNeighbor {
    std::string peer;
    std::string peerInterface;
    Span span;
};

struct FilterRule {
    Action action = Action::Permit;
    Prefix prefix;
    Span span;
};

struct BgpProcess {
    long asn = 0;
    std::vector<BgpNeighbor> neighbors;
    std::vector<NetworkStatement> networks;
    // Outbound route filters per neighbor router, first match wins, absent
    // filter permits everything.
    std::map<std::string, std::vector<FilterRule>> filters;
    Span span;

    const BgpNeighbor* neighbor(const std::string& peer) const;
    const NetworkStatement* network(const Prefix& p) const;
};

struct StaticRoute {
    Prefix dst;
    std::string nextHop;
    Span span;
};

struct RouterConfig {
    std::string name;
    std::string file;
    Span hostnameSpan;
    std::vector<Interface> interfaces;
    std::vector<AclDef> acls;
    std::optional<OspfProcess> ospf;
    std::optional<BgpProcess> bgp;
    std::vector<StaticRoute> staticRoutes;
    std::vector<Diagnostic> warnings;

    const Interface* interface(const std::string& name) const;
    Interface* interface(const std::string& name);
    const AclDef* acl(const std::string& name) const;
};

// Structural equality, ignoring source spans and warnings.
bool structurallyEqual(const RouterConfig& a, const RouterConfig& b);

struct Endpoint {
    std::string router;
    std::string iface;

    std::string str() const { return router + "." + iface; }
    bool operator==(const Endpoint&) const = default;
    auto operator<=>(const Endpoint&) const = default;
};

struct Link {
    Endpoint a;
    Endpoint b;

    // "r1-r3"; routers in file order
    std::string name() const { return a.router + "-" + b.router; }
    bool touches(const std::string& router) const { return a.router == router || b.router == router; }
    const Endpoint& side(const std::string& router) const { return a.router == router ? a : b; }
    const Endpoint& other(const std::string& router) const { return a.router == router ? b : a; }
};

struct Subnet {
    std::string name;
    Prefix prefix;
    Endpoint attach;
};

struct Topology {
    std::vector<std::string> routers;  // sorted
    // Interfaces declared per router in the topology file, when given.
    std::map<std::string, std::vector<std::string>> declaredInterfaces;
    std::vector<Link> links;
    std::vector<Subnet> subnets;  // sorted by name

    bool hasRouter(const std::string& r) const;
    const Subnet* subnet(const std::string& name) const;
    // Index of the link joining two routers, or -1.
    int linkBetween(const std::string& r1, const std::string& r2) const;
    // Neighbors of a router over links, sorted by name.
    std::vector<std::string> neighbors(const std::string& r) const;
    std::vector<const Subnet*> subnetsAt(const std::string& r) const;
};

struct Network {
    std::map<std::string, RouterConfig> routers;
    Topology topology;

    const RouterConfig& router(const std::string& name) const;
    const Interface* interface(const Endpoint& e) const;
};

}  // namespace cfgloc::net
