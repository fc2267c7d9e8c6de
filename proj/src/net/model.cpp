#include "cfgloc/net/model.hpp"

#include <algorithm>

#include "cfgloc/error.hpp"

namespace cfgloc::net {

std::string Span::str() const {
    if (!valid()) return file.empty() ? "<none>" : file;
    std::string out = file + ":" + std::to_string(firstLine);
    if (lastLine != firstLine) out += "-" + std::to_string(lastLine);
    return out;
}

std::string Diagnostic::str() const {
    std::string out = severity == Severity::Error ? "error: " : "warning: ";
    if (span.valid()) out = span.str() + ": " + out;
    return out + message;
}

const char* actionName(Action a) { return a == Action::Permit ? "permit" : "deny"; }
const char* directionName(Direction d) { return d == Direction::In ? "in" : "out"; }

bool AclDef::permits(std::uint32_t src, std::uint32_t dst) const {
    for (const auto& r : rules)
        if (r.src.contains(src) && r.dst.contains(dst)) return r.action == Action::Permit;
    return false;
}

const NetworkStatement* OspfProcess::covering(const Prefix& ifacePrefix) const {
    for (const auto& n : networks)
        if (n.prefix.contains(ifacePrefix)) return &n;
    return nullptr;
}

const BgpNeighbor* BgpProcess::neighbor(const std::string& peer) const {
    for (const auto& n : neighbors)
        if (n.peer == peer) return &n;
    return nullptr;
}

const NetworkStatement* BgpProcess::network(const Prefix& p) const {
    for (const auto& n : networks)
        if (n.prefix.contains(p)) return &n;
    return nullptr;
}

const Interface* RouterConfig::interface(const std::string& n) const {
    for (const auto& i : interfaces)
        if (i.name == n) return &i;
    return nullptr;
}

Interface* RouterConfig::interface(const std::string& n) {
    for (auto& i : interfaces)
        if (i.name == n) return &i;
    return nullptr;
}

const AclDef* RouterConfig::acl(const std::string& n) const {
    for (const auto& a : acls)
        if (a.name == n) return &a;
    return nullptr;
}

namespace {

bool sameIface(const Interface& a, const Interface& b) {
    return a.name == b.name && a.prefix == b.prefix && (!a.prefix || a.hostAddress == b.hostAddress) &&
           a.enabled == b.enabled && a.ospfCost == b.ospfCost && a.ospfPassive == b.ospfPassive &&
           a.inAcl == b.inAcl && a.outAcl == b.outAcl;
}

bool sameNetworks(const std::vector<NetworkStatement>& a, const std::vector<NetworkStatement>& b) {
    return std::equal(a.begin(), a.end(), b.begin(), b.end(),
                      [](const auto& x, const auto& y) { return x.prefix == y.prefix; });
}

}  // namespace

bool structurallyEqual(const RouterConfig& a, const RouterConfig& b) {
    if (a.name != b.name) return false;
    if (!std::equal(a.interfaces.begin(), a.interfaces.end(), b.interfaces.begin(), b.interfaces.end(), sameIface))
        return false;
    auto sameAcl = [](const AclDef& x, const AclDef& y) {
        return x.name == y.name &&
               std::equal(x.rules.begin(), x.rules.end(), y.rules.begin(), y.rules.end(), [](auto& p, auto& q) {
                   return p.action == q.action && p.src == q.src && p.dst == q.dst;
               });
    };
    if (!std::equal(a.acls.begin(), a.acls.end(), b.acls.begin(), b.acls.end(), sameAcl)) return false;
    if (a.ospf.has_value() != b.ospf.has_value()) return false;
    if (a.ospf && !sameNetworks(a.ospf->networks, b.ospf->networks)) return false;
    if (a.bgp.has_value() != b.bgp.has_value()) return false;
    if (a.bgp) {
        const auto& x = *a.bgp;
        const auto& y = *b.bgp;
        if (x.asn != y.asn || !sameNetworks(x.networks, y.networks)) return false;
        if (!std::equal(x.neighbors.begin(), x.neighbors.end(), y.neighbors.begin(), y.neighbors.end(),
                        [](auto& p, auto& q) { return p.peer == q.peer && p.peerInterface == q.peerInterface; }))
            return false;
        if (x.filters.size() != y.filters.size()) return false;
        for (const auto& [peer, rules] : x.filters) {
            auto it = y.filters.find(peer);
            if (it == y.filters.end()) return false;
            if (!std::equal(rules.begin(), rules.end(), it->second.begin(), it->second.end(),
                            [](auto& p, auto& q) { return p.action == q.action && p.prefix == q.prefix; }))
                return false;
        }
    }
    return std::equal(a.staticRoutes.begin(), a.staticRoutes.end(), b.staticRoutes.begin(), b.staticRoutes.end(),
                      [](auto& p, auto& q) { return p.dst == q.dst && p.nextHop == q.nextHop; });
}

bool Topology::hasRouter(const std::string& r) const { return std::binary_search(routers.begin(), routers.end(), r); }

const Subnet* Topology::subnet(const std::string& name) const {
    for (const auto& s : subnets)
        if (s.name == name) return &s;
    return nullptr;
}

int Topology::linkBetween(const std::string& r1, const std::string& r2) const {
    for (std::size_t i = 0; i < links.size(); ++i) {
        const auto& l = links[i];
        if ((l.a.router == r1 && l.b.router == r2) || (l.a.router == r2 && l.b.router == r1))
            return static_cast<int>(i);
    }
    return -1;
}

std::vector<std::string> Topology::neighbors(const std::string& r) const {
    std::vector<std::string> out;
    for (const auto& l : links)
        if (l.touches(r)) out.push_back(l.other(r).router);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<const Subnet*> Topology::subnetsAt(const std::string& r) const {
    std::vector<const Subnet*> out;
    for (const auto& s : subnets)
        if (s.attach.router == r) out.push_back(&s);
    return out;
}

const RouterConfig& Network::router(const std::string& name) const {
    auto it = routers.find(name);
    if (it == routers.end()) throw SemanticError("unknown router '" + name + "'");
    return it->second;
}

const Interface* Network::interface(const Endpoint& e) const {
    auto it = routers.find(e.router);
    if (it == routers.end()) return nullptr;
    return it->second.interface(e.iface);
}

}  // namespace cfgloc::net
