#pragma once

// Routing semantics shared by the constraint encoder and the reference
// simulator. Both compute routes for a single destination subnet T.
//
// Route preference at a router, first applicable wins:
//   1. connected: T is attached to one of the router's interfaces, the
//      interface is up and its address lies in T's prefix.
//   2. static: a static route whose prefix contains T's prefix and whose next
//      hop is reachable over an up link; lowest next-hop name first.
//   3. eBGP (distance 20): best BGP route learned from a peer in another AS.
//   4. OSPF (distance 110): lowest cost path.
//   5. iBGP (distance 200): best BGP route learned from a peer in the same AS.
// Within a protocol the best route minimises cost (OSPF) or path length (BGP);
// ties go to the neighbor whose router name sorts first.
//
// Links are up when neither endpoint interface is shut down, both carry
// addresses in the same subnet, and the link has not failed. OSPF runs on an
// interface when a `network` statement contains the interface subnet; an
// OSPF adjacency needs both ends running OSPF and neither end passive. A BGP
// session needs a `neighbor` statement on both ends of a direct link.
// Exports follow the neighbor's own choice: an originated route has cost (or
// length) equal to the exporting interface cost (or 1); a forwarded route adds
// that amount to the exporter's best route. Origination requires the subnet
// to be connected. BGP exports pass the exporter's outbound filter for the
// receiving neighbor.
//
// Packets are forwarded along the chosen next hop when the outbound ACL of the
// egress interface and the inbound ACL of the ingress interface both permit
// them; delivery to T checks the outbound ACL of T's interface, and a packet
// entering from S is checked against the inbound ACL of S's interface.

#include <cstdint>
#include <optional>

#include "cfgloc/net/model.hpp"

namespace cfgloc::semantics {

inline constexpr int kDistanceConnected = 0;
inline constexpr int kDistanceStatic = 1;
inline constexpr int kDistanceEbgp = 20;
inline constexpr int kDistanceOspf = 110;
inline constexpr int kDistanceIbgp = 200;

inline constexpr int kDefaultOspfCost = 1;
inline constexpr int kMaxOspfCost = 65535;

inline bool runsOspf(const net::RouterConfig& r, const net::Interface& i) {
    return r.ospf && i.prefix && r.ospf->covering(*i.prefix) != nullptr;
}

inline int ospfCost(const net::Interface& i) { return i.ospfCost.value_or(kDefaultOspfCost); }

inline bool l3Adjacent(const net::Interface& a, const net::Interface& b) {
    return a.prefix && b.prefix && *a.prefix == *b.prefix;
}

inline bool attachedAddressed(const net::Interface& i, const net::Prefix& subnet) {
    return i.prefix && *i.prefix == subnet;
}

// Outbound BGP filter toward `peer` for routes to `dst`: first rule whose
// prefix contains dst decides; a filter with no matching rule denies; no
// filter permits.
inline bool bgpExportPermitted(const net::BgpProcess& bgp, const std::string& peer, const net::Prefix& dst) {
    auto it = bgp.filters.find(peer);
    if (it == bgp.filters.end() || it->second.empty()) return true;
    for (const auto& rule : it->second)
        if (rule.prefix.contains(dst)) return rule.action == net::Action::Permit;
    return false;
}

inline bool bgpOriginates(const net::RouterConfig& r, const net::Prefix& dst) {
    return r.bgp && r.bgp->network(dst) != nullptr;
}

inline bool staticRouteVia(const net::RouterConfig& r, const std::string& nextHop, const net::Prefix& dst) {
    for (const auto& s : r.staticRoutes)
        if (s.nextHop == nextHop && s.dst.contains(dst)) return true;
    return false;
}

inline bool bgpSession(const net::RouterConfig& a, const net::RouterConfig& b) {
    return a.bgp && b.bgp && a.bgp->neighbor(b.name) && b.bgp->neighbor(a.name);
}

inline bool isEbgp(const net::RouterConfig& a, const net::RouterConfig& b) {
    return a.bgp && b.bgp && a.bgp->asn != b.bgp->asn;
}

}  // namespace cfgloc::semantics
