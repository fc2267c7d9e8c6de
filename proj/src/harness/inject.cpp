#include "cfgloc/harness/inject.hpp"

#include <algorithm>
#include <set>
#include <utility>

#include "cfgloc/error.hpp"
#include "cfgloc/harness/rng.hpp"
#include "cfgloc/net/parse.hpp"

namespace cfgloc::harness {

const char* errorTypeName(ErrorType t) {
    switch (t) {
        case ErrorType::OmitNw: return "OmitNw";
        case ErrorType::OmitNb: return "OmitNb";
        case ErrorType::OmitAcl: return "OmitAcl";
        case ErrorType::OmitAclRule: return "OmitAclRule";
        case ErrorType::ExtraAcl: return "ExtraAcl";
    }
    return "?";
}

std::optional<ErrorType> parseErrorType(const std::string& s) {
    for (auto t : {ErrorType::OmitNw, ErrorType::OmitNb, ErrorType::OmitAcl, ErrorType::OmitAclRule,
                   ErrorType::ExtraAcl})
        if (s == errorTypeName(t)) return t;
    return std::nullopt;
}

namespace {

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& v) {
    return v[rng.below(v.size())];
}

class Injector {
public:
    Injector(const net::Network& network, ErrorType type, std::uint64_t seed)
        : net_(network), rng_(seed) {
        err_.type = type;
        err_.seed = seed;
    }

    Injection run() {
        switch (err_.type) {
            case ErrorType::OmitNw: omitNetwork(); break;
            case ErrorType::OmitNb: omitNeighbor(); break;
            case ErrorType::OmitAcl: omitAcl(); break;
            case ErrorType::OmitAclRule: omitAclRule(); break;
            case ErrorType::ExtraAcl: extraAcl(); break;
        }
        for (const auto& r : touched_) {
            auto& cfg = net_.routers.at(r);
            cfg = net::parseConfig(net::printConfig(cfg), cfg.file);
        }
        if (err_.type == ErrorType::ExtraAcl) {
            // Added lines exist only in the printed text.
            auto& item = err_.items.front();
            const auto& cfg = net_.routers.at(item.router);
            item.spans = {cfg.acl(addedAcl_)->span};
            for (const auto& i : cfg.interfaces)
                if (i.name == addedIface_) item.spans.push_back(i.aclSpan(addedDir_));
        }
        return Injection{std::move(net_), std::move(err_)};
    }

private:
    [[noreturn]] void none(const char* what) const {
        throw Error(std::string(errorTypeName(err_.type)) + ": the network has no " + what);
    }

    net::RouterConfig& cfg(const std::string& r) {
        touched_.insert(r);
        return net_.routers.at(r);
    }

    std::vector<std::string> ospfSites(const net::RouterConfig& c, const net::Prefix& stmt) const {
        std::vector<std::string> out;
        for (const auto& i : c.interfaces)
            if (i.prefix && stmt.contains(*i.prefix)) out.push_back(c.name + "|ospf-iface|" + i.name);
        return out;
    }

    void omitNetwork() {
        struct Cand {
            std::string router;
            bool bgp;
            std::size_t index;
        };
        std::vector<Cand> cands;
        for (const auto& [name, c] : net_.routers) {
            if (c.ospf)
                for (std::size_t i = 0; i < c.ospf->networks.size(); ++i) cands.push_back({name, false, i});
            if (c.bgp)
                for (std::size_t i = 0; i < c.bgp->networks.size(); ++i) cands.push_back({name, true, i});
        }
        if (cands.empty()) none("network statement");
        Cand x = pick(rng_, cands);
        auto& c = cfg(x.router);
        auto& list = x.bgp ? c.bgp->networks : c.ospf->networks;
        net::NetworkStatement stmt = list[x.index];
        GroundTruthItem item{x.router, {}, {stmt.span}};
        if (x.bgp) {
            for (const auto* s : net_.topology.subnetsAt(x.router))
                if (s->prefix == stmt.prefix) item.sites.push_back(x.router + "|bgp-origin|" + s->name);
        } else {
            item.sites = ospfSites(c, stmt.prefix);
        }
        list.erase(list.begin() + static_cast<long>(x.index));
        err_.description = x.router + ": removed " + (x.bgp ? "bgp" : "ospf") + " network " + stmt.prefix.str();
        err_.items.push_back(std::move(item));
    }

    void omitNeighbor() {
        struct Cand {
            std::size_t link;
            bool bgp;
        };
        std::vector<Cand> cands;
        const auto& links = net_.topology.links;
        for (std::size_t li = 0; li < links.size(); ++li) {
            const auto& a = net_.router(links[li].a.router);
            const auto& b = net_.router(links[li].b.router);
            if (a.bgp && b.bgp && a.bgp->neighbor(b.name) && b.bgp->neighbor(a.name)) cands.push_back({li, true});
            const auto* ia = net_.interface(links[li].a);
            const auto* ib = net_.interface(links[li].b);
            if (a.ospf && b.ospf && ia && ib && ia->prefix && ib->prefix && a.ospf->covering(*ia->prefix) &&
                b.ospf->covering(*ib->prefix))
                cands.push_back({li, false});
        }
        if (cands.empty()) none("BGP session or OSPF adjacency");
        Cand x = pick(rng_, cands);
        const net::Link link = links[x.link];
        for (const auto& [self, peer] : {std::pair{link.a, link.b}, std::pair{link.b, link.a}}) {
            auto& c = cfg(self.router);
            GroundTruthItem item{self.router, {}, {}};
            if (x.bgp) {
                auto& ns = c.bgp->neighbors;
                auto it = std::find_if(ns.begin(), ns.end(), [&](const auto& n) { return n.peer == peer.router; });
                item.spans.push_back(it->span);
                ns.erase(it);
                // A filter toward a router that is no longer a neighbor is invalid.
                if (auto f = c.bgp->filters.find(peer.router); f != c.bgp->filters.end()) {
                    for (const auto& r : f->second) item.spans.push_back(r.span);
                    c.bgp->filters.erase(f);
                }
                item.sites.push_back(self.router + "|bgp-neighbor|" + peer.router);
            } else {
                auto& nws = c.ospf->networks;
                const auto& prefix = *c.interface(self.iface)->prefix;
                auto it = std::find_if(nws.begin(), nws.end(), [&](const auto& n) { return n.prefix.contains(prefix); });
                item.spans.push_back(it->span);
                item.sites = ospfSites(c, it->prefix);
                nws.erase(it);
            }
            err_.items.push_back(std::move(item));
        }
        err_.description = std::string("removed ") + (x.bgp ? "bgp session " : "ospf adjacency ") + link.name();
    }

    void omitAcl() {
        struct Cand {
            std::string router, iface;
            net::Direction dir;
        };
        std::vector<Cand> cands;
        for (const auto& [name, c] : net_.routers)
            for (const auto& i : c.interfaces)
                for (auto d : {net::Direction::In, net::Direction::Out})
                    if (i.acl(d)) cands.push_back({name, i.name, d});
        if (cands.empty()) none("applied ACL");
        Cand x = pick(rng_, cands);
        auto* i = cfg(x.router).interface(x.iface);
        auto& slot = x.dir == net::Direction::In ? i->inAcl : i->outAcl;
        std::string dir = net::directionName(x.dir);
        err_.items.push_back({x.router, {x.router + "|iface|" + x.iface + "|acl-" + dir}, {i->aclSpan(x.dir)}});
        err_.description = x.router + ": removed access-group " + *slot + " " + dir + " on " + x.iface;
        slot.reset();
    }

    static bool sameRules(const net::AclDef& a, const net::AclDef& b) {
        return a.rules.size() == b.rules.size() &&
               std::equal(a.rules.begin(), a.rules.end(), b.rules.begin(), [](const auto& x, const auto& y) {
                   return x.action == y.action && x.src == y.src && x.dst == y.dst;
               });
    }

    void omitAclRule() {
        std::vector<std::pair<std::string, std::string>> cands;
        for (const auto& [name, c] : net_.routers)
            for (const auto& a : c.acls)
                if (a.rules.size() >= 2) cands.emplace_back(name, a.name);
        if (cands.empty()) none("ACL with at least two rules");
        auto [router, aclName] = pick(rng_, cands);
        const net::AclDef original = *net_.router(router).acl(aclName);
        std::size_t index = rng_.below(original.rules.size());
        std::vector<std::string> replicas;
        for (const auto& [name, c] : net_.routers)
            if (const auto* a = c.acl(aclName); a && sameRules(*a, original)) replicas.push_back(name);
        for (const auto& r : replicas) {
            auto& c = cfg(r);
            auto it = std::find_if(c.acls.begin(), c.acls.end(), [&](const auto& a) { return a.name == aclName; });
            err_.items.push_back({r, {r + "|acl|" + aclName}, {it->rules[index].span}});
            it->rules.erase(it->rules.begin() + static_cast<long>(index));
        }
        err_.description = "removed rule " + std::to_string(index + 1) + " of " + aclName + " on " +
                           std::to_string(replicas.size()) + " router(s)";
    }

    void extraAcl() {
        struct Cand {
            std::string router, iface;
            net::Direction dir;
        };
        // Interfaces that carry traffic: link ends and subnet attachments.
        std::set<net::Endpoint> used;
        for (const auto& l : net_.topology.links) used.insert({l.a, l.b});
        for (const auto& s : net_.topology.subnets) used.insert(s.attach);
        std::vector<Cand> cands;
        for (const auto& e : used) {
            const auto* i = net_.interface(e);
            if (!i) continue;
            for (auto d : {net::Direction::In, net::Direction::Out})
                if (!i->acl(d)) cands.push_back({e.router, e.iface, d});
        }
        if (cands.empty() || net_.topology.subnets.empty()) none("interface without an ACL");
        Cand x = pick(rng_, cands);
        const auto& subnet = pick(rng_, net_.topology.subnets);
        auto& c = cfg(x.router);
        std::string name;
        for (int n = 1; name.empty() || c.acl(name); ++n) name = "extra" + std::to_string(n);
        net::AclDef def;
        def.name = name;
        def.rules.push_back({net::Action::Deny, net::Prefix{}, subnet.prefix, {}});
        def.rules.push_back({net::Action::Permit, net::Prefix{}, net::Prefix{}, {}});
        c.acls.push_back(def);
        auto* i = c.interface(x.iface);
        (x.dir == net::Direction::In ? i->inAcl : i->outAcl) = name;
        std::string dir = net::directionName(x.dir);
        err_.items.push_back(
            {x.router, {x.router + "|iface|" + x.iface + "|acl-" + dir, x.router + "|acl|" + name}, {}});
        err_.description = x.router + ": added " + name + " denying " + subnet.name + " on " + x.iface + " " + dir;
        addedAcl_ = name;
        addedIface_ = x.iface;
        addedDir_ = x.dir;
    }

    net::Network net_;
    Rng rng_;
    InjectedError err_;
    std::set<std::string> touched_;
    std::string addedAcl_, addedIface_;
    net::Direction addedDir_ = net::Direction::In;
};

}  // namespace

Injection inject(const net::Network& network, ErrorType type, std::uint64_t seed) {
    return Injector(network, type, seed).run();
}

}  // namespace cfgloc::harness
