#include "cfgloc/harness/simulate.hpp"

#include <algorithm>

#include "cfgloc/error.hpp"
#include "cfgloc/semantics.hpp"

namespace cfgloc::harness {

const char* dropName(Drop d) {
    switch (d) {
        case Drop::None: return "none";
        case Drop::NoRoute: return "no-route";
        case Drop::Acl: return "acl";
        case Drop::Loop: return "loop";
        case Drop::SourceDown: return "source-down";
    }
    return "?";
}

namespace {

struct Route {
    bool valid = false;
    std::uint64_t cost = 0;
    std::string via;
    bool operator==(const Route&) const = default;
};

struct Sim {
    const net::Network& net;
    const net::Topology& topo;
    const net::Subnet& dst;
    std::vector<bool> up;
    std::string d;  // destination router

    const net::RouterConfig& cfg(const std::string& r) const { return net.router(r); }
    const net::Interface& iface(const net::Endpoint& e) const { return *net.interface(e); }

    bool connected() const {
        const auto& i = iface(dst.attach);
        return i.enabled && semantics::attachedAddressed(i, dst.prefix);
    }

    bool ospfAdjacent(int li) const {
        const auto& l = topo.links[li];
        const auto& ra = cfg(l.a.router);
        const auto& rb = cfg(l.b.router);
        const auto& ia = iface(l.a);
        const auto& ib = iface(l.b);
        return ra.ospf && rb.ospf && semantics::runsOspf(ra, ia) && semantics::runsOspf(rb, ib) && !ia.ospfPassive &&
               !ib.ospfPassive;
    }

    // Synchronous distance-vector rounds from the all-invalid state. Costs are
    // positive, so the least fixpoint is reached within |routers| rounds.
    template <class Offer>
    std::map<std::string, Route> propagate(Offer offer) const {
        std::map<std::string, Route> best;
        for (const auto& r : topo.routers) best[r] = Route{};
        for (std::size_t round = 0; round <= 2 * topo.routers.size() + 2; ++round) {
            std::map<std::string, Route> next;
            for (const auto& r : topo.routers) {
                Route b;
                for (const auto& n : topo.neighbors(r)) {
                    Route o = offer(r, n, best);
                    if (o.valid && (!b.valid || o.cost < b.cost)) b = o;
                }
                next[r] = b;
            }
            if (next == best) return best;
            best = std::move(next);
        }
        throw InternalError("route propagation did not converge");
    }

    std::map<std::string, Route> ospf() const {
        bool origin = cfg(d).ospf && semantics::runsOspf(cfg(d), iface(dst.attach)) && connected();
        return propagate([&](const std::string& r, const std::string& n, const std::map<std::string, Route>& best) {
            Route o;
            if (!cfg(r).ospf) return o;
            int li = topo.linkBetween(r, n);
            if (!up[li] || !ospfAdjacent(li)) return o;
            std::uint64_t c = static_cast<std::uint64_t>(semantics::ospfCost(iface(topo.links[li].side(n))));
            if (n == d && origin) return Route{true, c, n};
            if (best.at(n).valid) return Route{true, best.at(n).cost + c, n};
            return o;
        });
    }

    std::map<std::string, Route> bgp() const {
        bool origin = cfg(d).bgp && semantics::bgpOriginates(cfg(d), dst.prefix) && connected();
        return propagate([&](const std::string& r, const std::string& n, const std::map<std::string, Route>& best) {
            Route o;
            const auto& rc = cfg(r);
            const auto& nc = cfg(n);
            if (!rc.bgp || !nc.bgp) return o;
            int li = topo.linkBetween(r, n);
            if (!up[li] || !semantics::bgpSession(rc, nc)) return o;
            if (!semantics::bgpExportPermitted(*nc.bgp, r, dst.prefix)) return o;
            if (n == d && origin) return Route{true, 1, n};
            if (best.at(n).valid) return Route{true, best.at(n).cost + 1, n};
            return o;
        });
    }
};

bool aclPermits(const net::RouterConfig& r, const net::Interface& i, net::Direction dir, std::uint32_t s,
                std::uint32_t t) {
    const auto& name = i.acl(dir);
    if (!name) return true;
    const auto* acl = r.acl(*name);
    return acl && acl->permits(s, t);
}

}  // namespace

SimResult simulate(const net::Network& network, const std::string& srcSubnet, const std::string& dstSubnet,
                   const std::set<int>& failed, std::uint32_t srcAddr, std::uint32_t dstAddr) {
    const auto& topo = network.topology;
    const auto* src = topo.subnet(srcSubnet);
    const auto* dst = topo.subnet(dstSubnet);
    if (!src || !dst) throw SemanticError("simulate: unknown subnet");

    Sim sim{network, topo, *dst, {}, dst->attach.router};
    for (std::size_t li = 0; li < topo.links.size(); ++li) {
        const auto& l = topo.links[li];
        const auto& ia = *network.interface(l.a);
        const auto& ib = *network.interface(l.b);
        sim.up.push_back(!failed.count(static_cast<int>(li)) && ia.enabled && ib.enabled &&
                         semantics::l3Adjacent(ia, ib));
    }
    auto ospf = sim.ospf();
    auto bgp = sim.bgp();

    SimResult res;
    for (const auto& r : topo.routers) {
        const auto& rc = network.router(r);
        std::string hop;
        if (r == sim.d && sim.connected()) hop = "T";
        if (hop.empty())
            for (const auto& nh : topo.neighbors(r))
                if (semantics::staticRouteVia(rc, nh, dst->prefix) && sim.up[topo.linkBetween(r, nh)]) {
                    hop = nh;
                    break;
                }
        const Route& b = bgp.at(r);
        bool ebgp = b.valid && semantics::isEbgp(rc, network.router(b.via));
        if (hop.empty() && b.valid && ebgp) hop = b.via;
        if (hop.empty() && ospf.at(r).valid) hop = ospf.at(r).via;
        if (hop.empty() && b.valid && !ebgp) hop = b.via;
        res.nextHop[r] = hop;

        if (hop == "T") {
            if (aclPermits(rc, *rc.interface(dst->attach.iface), net::Direction::Out, srcAddr, dstAddr))
                res.forwards.insert({r, "T"});
        } else if (!hop.empty()) {
            const auto& l = topo.links[topo.linkBetween(r, hop)];
            const auto& out = *rc.interface(l.side(r).iface);
            const auto& hc = network.router(hop);
            const auto& in = *hc.interface(l.side(hop).iface);
            if (aclPermits(rc, out, net::Direction::Out, srcAddr, dstAddr) &&
                aclPermits(hc, in, net::Direction::In, srcAddr, dstAddr))
                res.forwards.insert({r, hop});
        }
    }

    // A delivering walk visits each router once, so it has fewer than
    // |routers| inter-router hops.
    auto walk = [&](const std::string& start, std::vector<std::string>* path, Drop* why) {
        std::string r = start;
        for (std::size_t hops = 0;; ++hops) {
            if (path) path->push_back(r);
            const std::string& hop = res.nextHop.at(r);
            if (hop.empty()) {
                if (why) *why = Drop::NoRoute;
                return false;
            }
            if (!res.forwards.count({r, hop})) {
                if (why) *why = Drop::Acl;
                return false;
            }
            if (hop == "T") return true;
            if (hops + 1 >= topo.routers.size()) {
                if (why) *why = Drop::Loop;
                return false;
            }
            r = hop;
        }
    };
    for (const auto& r : topo.routers) res.reaches[r] = walk(r, nullptr, nullptr);

    const auto& sc = network.router(src->attach.router);
    const auto& si = *sc.interface(src->attach.iface);
    if (!si.enabled || !semantics::attachedAddressed(si, src->prefix)) {
        res.drop = Drop::SourceDown;
    } else if (!aclPermits(sc, si, net::Direction::In, srcAddr, dstAddr)) {
        res.drop = Drop::Acl;
        res.path = {src->attach.router};
    } else {
        res.delivered = walk(src->attach.router, &res.path, &res.drop);
    }
    return res;
}

std::vector<std::pair<std::uint32_t, std::uint32_t>> representativePackets(const net::Network& network,
                                                                           const net::Prefix& src,
                                                                           const net::Prefix& dst) {
    // Rule boundaries split each prefix into intervals where every ACL rule
    // either matches all addresses or none.
    auto cuts = [](const net::Prefix& p, std::set<std::uint64_t> points) {
        std::vector<std::uint32_t> reps;
        points.insert(p.first());
        for (auto x : points)
            if (x >= p.first() && x <= p.last()) reps.push_back(static_cast<std::uint32_t>(x));
        return reps;
    };
    std::set<std::uint64_t> sp, dp;
    for (const auto& [name, r] : network.routers)
        for (const auto& acl : r.acls)
            for (const auto& rule : acl.rules) {
                sp.insert(rule.src.first());
                sp.insert(std::uint64_t(rule.src.last()) + 1);
                dp.insert(rule.dst.first());
                dp.insert(std::uint64_t(rule.dst.last()) + 1);
            }
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (auto s : cuts(src, sp))
        for (auto t : cuts(dst, dp)) out.emplace_back(s, t);
    return out;
}

namespace {

// Calls fn with every set of at most k link indices below n.
template <typename Fn>
bool forEachFailureSet(int n, int k, std::set<int>& cur, int from, Fn&& fn) {
    if (fn(cur)) return true;
    if (static_cast<int>(cur.size()) == k) return false;
    for (int i = from; i < n; ++i) {
        cur.insert(i);
        bool stop = forEachFailureSet(n, k, cur, i + 1, fn);
        cur.erase(i);
        if (stop) return true;
    }
    return false;
}

}  // namespace

std::vector<std::string> simulatedViolations(const net::Network& network,
                                             const std::vector<req::Requirement>& requirements) {
    std::vector<std::string> out;
    int links = static_cast<int>(network.topology.links.size());
    for (const auto& r : requirements) {
        auto tc = req::trafficClass(r, network.topology);
        auto packets = representativePackets(network, tc.src, tc.dst);
        std::set<int> failed;
        bool violated = forEachFailureSet(links, std::min(r.maxFailures, links), failed, 0, [&](const std::set<int>& f) {
            for (auto [s, d] : packets) {
                bool delivered = simulate(network, r.src, r.dst, f, s, d).delivered;
                if (delivered != (r.kind == req::Kind::Reachable)) return true;
            }
            return false;
        });
        if (violated) out.push_back(r.id);
    }
    return out;
}

}  // namespace cfgloc::harness
