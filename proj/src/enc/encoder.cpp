#include "cfgloc/enc/encoder.hpp"

#include <algorithm>
#include <functional>
#include <ostream>
#include <set>

#include "cfgloc/error.hpp"
#include "cfgloc/net/parse.hpp"
#include "cfgloc/semantics.hpp"

namespace cfgloc::enc {

using net::Endpoint;
using smt::Category;
using smt::LabelId;
using smt::Term;

const char* kindName(VarKind k) {
    switch (k) {
        case VarKind::OspfAdjacency: return "OspfAdjacency";
        case VarKind::OspfOriginate: return "OspfOriginate";
        case VarKind::OspfCost: return "OspfCost";
        case VarKind::OspfPassive: return "OspfPassive";
        case VarKind::BgpAdjacency: return "BgpAdjacency";
        case VarKind::BgpOriginate: return "BgpOriginate";
        case VarKind::RouteFilter: return "RouteFilter";
        case VarKind::AclUse: return "AclUse";
        case VarKind::InterfaceState: return "InterfaceState";
        case VarKind::L3Adjacency: return "L3Adjacency";
        case VarKind::StaticRoute: return "StaticRoute";
    }
    return "?";
}

std::vector<LabelId> ConstraintSystem::hardLabels() const {
    std::vector<LabelId> out = logic;
    out.push_back(requirementLabel);
    return out;
}

const ConfigVar* ConstraintSystem::varForLabel(LabelId id) const {
    auto it = varOfBinding.find(id);
    return it == varOfBinding.end() ? nullptr : &configVars[it->second];
}

const ConfigVar* ConstraintSystem::var(const std::string& key) const {
    for (const auto& v : configVars)
        if (v.key == key) return &v;
    return nullptr;
}

void ConstraintSystem::dump(std::ostream& out) const { system->writeText(out); }

namespace {

ConfigVar makeVar(VarKind kind, std::string router, std::string site) {
    ConfigVar v;
    v.kind = kind;
    v.router = std::move(router);
    v.site = std::move(site);
    return v;
}

struct Candidate {
    std::string neighbor;
    Term valid;
    Term cost;
};

struct Best {
    Term valid;
    Term cost;
    std::vector<std::pair<std::string, Term>> selected;  // neighbor, selection var
};

class Encoder {
public:
    Encoder(const net::Network& net, ConstraintSystem& cs) : net_(net), topo_(net.topology), cs_(cs) {
        cs_.system = std::make_unique<smt::System>();
        tm_ = &cs_.system->terms();
    }

    void run(int maxFailures);

private:
    smt::TermManager& tm() { return *tm_; }

    Term boolSym(const std::string& name) {
        Term t = tm().boolVar(name);
        cs_.symbols.insert(t.id);
        return t;
    }
    Term intSym(const std::string& name, unsigned width) {
        Term t = tm().intVar(name, width);
        cs_.symbols.insert(t.id);
        return t;
    }
    void logic(Term f, const std::string& meta) {
        if (tm().isTrue(f)) return;
        cs_.logic.push_back(cs_.system->add(f, Category::Logic, meta));
    }
    Term define(const std::string& name, Term f) {
        Term v = boolSym(name);
        logic(tm().mkIff(v, f), name);
        return v;
    }

    // Creates a configuration variable whose binding is built from constants
    // carrying the variable's tag.
    Term configVar(ConfigVar v, unsigned width, const std::function<Term(std::uint32_t tag)>& value);
    Term boolConfig(ConfigVar v, bool value) {
        return configVar(std::move(v), 0, [&](std::uint32_t tag) { return tm().boolConst(value, tag); });
    }

    Term inPrefix(Term addr, const net::Prefix& p, std::uint32_t tag);
    Term aclFormula(const net::AclDef& acl, std::uint32_t tag);

    void checkSupported();
    void interfaces();
    void acls();
    void ospf();
    void bgp();
    void statics();
    void routing();
    void forwarding();
    void requirement();
    void cardinality(int k);

    Best select(const std::string& router, const std::string& proto, const std::vector<Candidate>& cands,
                Term valid, Term cost);

    Term up(const Endpoint& e) const { return up_.at(e); }
    Term acl(const Endpoint& e, net::Direction d) const {
        auto it = acl_.find({e, d});
        return it == acl_.end() ? tm_->boolConst(true) : it->second;
    }
    Term linkUp(int li) const { return linkUp_[li]; }
    const net::RouterConfig& cfg(const std::string& r) const { return net_.router(r); }
    std::string file(const std::string& r) const { return cfg(r).file; }
    bool runsBgp(const std::string& r) const { return cfg(r).bgp.has_value(); }
    bool runsOspf(const std::string& r) const { return cfg(r).ospf.has_value(); }

    const net::Network& net_;
    const net::Topology& topo_;
    ConstraintSystem& cs_;
    smt::TermManager* tm_ = nullptr;

    const net::Subnet* src_ = nullptr;
    const net::Subnet* dst_ = nullptr;

    bool aclsUsed_ = false, passiveUsed_ = false, costUsed_ = false, filtersUsed_ = false, staticUsed_ = false;

    std::map<Endpoint, Term> up_;
    std::map<std::pair<Endpoint, net::Direction>, Term> acl_;
    std::vector<Term> l3Link_, linkUp_;
    std::map<Endpoint, Term> l3Attach_;
    Term connected_;  // at the destination router

    std::map<int, Term> ospfAdj_;             // link index -> effective adjacency
    std::map<Endpoint, Term> ospfCost_;
    Term ospfOrigin_;                         // invalid when not applicable
    std::map<int, Term> bgpAdj_;
    std::map<std::pair<std::string, std::string>, Term> filter_;
    Term bgpOrigin_;
    std::map<std::pair<std::string, std::string>, Term> static_;

    Term bound_;
};

Term Encoder::configVar(ConfigVar v, unsigned width, const std::function<Term(std::uint32_t)>& value) {
    auto index = cs_.configVars.size();
    auto tag = static_cast<std::uint32_t>(index + 1);
    v.key = std::string(kindName(v.kind)) + ":" + v.router + ":" + v.site;
    v.term = width == 0 ? boolSym(v.key) : intSym(v.key, width);
    Term rhs = value(tag);
    Term binding = width == 0 ? tm().mkIff(v.term, rhs) : tm().mkEq(v.term, rhs);
    std::string meta = v.key + " @ ";
    if (v.absent) {
        meta += "absent";
    } else {
        for (std::size_t i = 0; i < v.spans.size(); ++i) meta += (i ? "," : "") + v.spans[i].str();
    }
    v.binding = cs_.system->add(binding, Category::Config, meta);
    cs_.config.push_back(v.binding);
    cs_.varOfBinding[v.binding] = index;
    Term t = v.term;
    cs_.configVars.push_back(std::move(v));
    return t;
}

Term Encoder::inPrefix(Term addr, const net::Prefix& p, std::uint32_t tag) {
    if (p.isAny()) return Term{};
    if (p.length == 32) return tm().mkEq(addr, tm().intConst(p.first(), 32, tag));
    return tm().mkInRange(addr, tm().intConst(p.first(), 32, tag), tm().intConst(p.last(), 32, tag));
}

Term Encoder::aclFormula(const net::AclDef& acl, std::uint32_t tag) {
    Term f = tm().boolConst(false, tag);
    for (auto it = acl.rules.rbegin(); it != acl.rules.rend(); ++it) {
        Term action = tm().boolConst(it->action == net::Action::Permit, tag);
        std::vector<Term> conds;
        for (Term c : {inPrefix(cs_.srcAddr, it->src, tag), inPrefix(cs_.dstAddr, it->dst, tag)})
            if (c.valid()) conds.push_back(c);
        f = conds.empty() ? action : tm().mkIte(tm().mkAnd(conds), action, f);
    }
    return f;
}

void Encoder::checkSupported() {
    const net::Prefix& t = dst_->prefix;
    for (const auto& [name, r] : net_.routers) {
        for (const auto& s : r.staticRoutes)
            if (s.dst.overlaps(t) && !s.dst.contains(t))
                throw UnsupportedFeature(s.span.str() + ": static route " + s.dst.str() +
                                         " is more specific than destination " + t.str() +
                                         "; longest-prefix match across routes is not supported");
        if (r.bgp)
            for (const auto& n : r.bgp->networks)
                if (n.prefix.overlaps(t) && !n.prefix.contains(t))
                    throw UnsupportedFeature(n.span.str() + ": BGP network " + n.prefix.str() +
                                             " is more specific than destination " + t.str() +
                                             "; longest-prefix match across routes is not supported");
        for (const auto& i : r.interfaces) {
            if (i.inAcl) aclsUsed_ = true;
            if (i.outAcl) aclsUsed_ = true;
            if (i.ospfPassive) passiveUsed_ = true;
            if (i.ospfCost) costUsed_ = true;
        }
        if (r.bgp)
            for (const auto& [peer, rules] : r.bgp->filters)
                if (!rules.empty()) filtersUsed_ = true;
        if (!r.staticRoutes.empty()) staticUsed_ = true;
    }
}

void Encoder::interfaces() {
    std::vector<Endpoint> ends;
    for (const auto& l : topo_.links) {
        ends.push_back(l.a);
        ends.push_back(l.b);
    }
    ends.push_back(src_->attach);
    if (dst_->attach != src_->attach) ends.push_back(dst_->attach);
    for (const auto& e : ends) {
        const net::Interface& i = *net_.interface(e);
        ConfigVar v = makeVar(VarKind::InterfaceState, e.router, e.iface);
        if (!i.enabled)
            v.spans = {i.shutdownSpan};
        else
            v.spans = {net::Span{i.span.file, i.span.firstLine, i.span.firstLine}};
        v.sites = {e.router + "|iface|" + e.iface + "|state"};
        up_[e] = boolConfig(std::move(v), i.enabled);
    }

    for (std::size_t li = 0; li < topo_.links.size(); ++li) {
        const auto& l = topo_.links[li];
        const auto& ia = *net_.interface(l.a);
        const auto& ib = *net_.interface(l.b);
        ConfigVar v = makeVar(VarKind::L3Adjacency, l.a.router, l.name());
        for (const auto* i : {&ia, &ib})
            if (i->ipSpan.valid()) v.spans.push_back(i->ipSpan);
        v.absent = v.spans.empty();
        if (!ia.prefix) v.router = l.a.router;
        else if (!ib.prefix) v.router = l.b.router;
        if (v.absent || !ia.prefix || !ib.prefix) v.suggestion = "ip <address>/<len> on both ends of " + l.name();
        v.sites = {l.a.router + "|iface|" + l.a.iface + "|ip", l.b.router + "|iface|" + l.b.iface + "|ip"};
        l3Link_.push_back(boolConfig(std::move(v), semantics::l3Adjacent(ia, ib)));

        cs_.failVars.push_back(boolSym("failed(" + l.name() + ")"));
    }
    for (const auto* s : {src_, dst_}) {
        if (l3Attach_.count(s->attach)) continue;
        const auto& i = *net_.interface(s->attach);
        ConfigVar v = makeVar(VarKind::L3Adjacency, s->attach.router, s->attach.iface);
        if (i.ipSpan.valid()) v.spans = {i.ipSpan};
        v.absent = !i.prefix;
        if (v.absent) v.suggestion = "ip <address in " + s->prefix.str() + "> on " + s->attach.str();
        v.sites = {s->attach.router + "|iface|" + s->attach.iface + "|ip"};
        l3Attach_[s->attach] = boolConfig(std::move(v), semantics::attachedAddressed(i, s->prefix));
    }
    for (std::size_t li = 0; li < topo_.links.size(); ++li) {
        const auto& l = topo_.links[li];
        linkUp_.push_back(tm().mkAnd({tm().mkNot(cs_.failVars[li]), up(l.a), up(l.b), l3Link_[li]}));
    }
    connected_ = tm().mkAnd({up(dst_->attach), l3Attach_.at(dst_->attach)});
}

void Encoder::acls() {
    if (!aclsUsed_) return;
    for (const auto& [e, unused] : up_) {
        const auto& r = cfg(e.router);
        const auto& i = *r.interface(e.iface);
        for (auto d : {net::Direction::In, net::Direction::Out}) {
            const std::string dir = net::directionName(d);
            ConfigVar v = makeVar(VarKind::AclUse, e.router, e.iface + ":" + dir);
            v.sites = {e.router + "|iface|" + e.iface + "|acl-" + dir};
            const net::AclDef* def = i.acl(d) ? r.acl(*i.acl(d)) : nullptr;
            if (def) {
                v.spans = {i.aclSpan(d)};
                if (def->span.valid()) v.spans.push_back(def->span);
                v.sites.push_back(e.router + "|acl|" + def->name);
                acl_[{e, d}] = configVar(std::move(v), 0, [&](std::uint32_t tag) { return aclFormula(*def, tag); });
            } else {
                v.absent = true;
                v.suggestion = "ip access-group <name> " + dir + " under interface " + e.iface;
                acl_[{e, d}] = boolConfig(std::move(v), true);
            }
        }
    }
}

void Encoder::ospf() {
    const unsigned w = cs_.costWidth;
    std::map<Endpoint, Term> passive;
    for (std::size_t li = 0; li < topo_.links.size(); ++li) {
        const auto& l = topo_.links[li];
        if (!runsOspf(l.a.router) || !runsOspf(l.b.router)) continue;
        const auto& ra = cfg(l.a.router);
        const auto& rb = cfg(l.b.router);
        const auto& ia = *ra.interface(l.a.iface);
        const auto& ib = *rb.interface(l.b.iface);
        bool ca = semantics::runsOspf(ra, ia), cb = semantics::runsOspf(rb, ib);

        ConfigVar v = makeVar(VarKind::OspfAdjacency, l.a.router, l.name());
        if (ca) v.spans.push_back(ra.ospf->covering(*ia.prefix)->span);
        if (cb) v.spans.push_back(rb.ospf->covering(*ib.prefix)->span);
        v.absent = !(ca && cb);
        if (!ca) v.router = l.a.router;
        else if (!cb) v.router = l.b.router;
        for (const auto& [ok, e, i] : {std::tuple{ca, l.a, &ia}, std::tuple{cb, l.b, &ib}})
            if (!ok)
                v.suggestion += (v.suggestion.empty() ? "" : "; ") + e.router + ": router ospf network " +
                                (i->prefix ? i->prefix->str() : "<subnet of " + e.str() + ">");
        v.sites = {l.a.router + "|ospf-iface|" + l.a.iface, l.b.router + "|ospf-iface|" + l.b.iface};
        Term adj = boolConfig(std::move(v), ca && cb);

        std::vector<Term> parts{adj};
        for (const auto& [e, i] : {std::pair{l.a, &ia}, std::pair{l.b, &ib}}) {
            if (passiveUsed_) {
                ConfigVar p = makeVar(VarKind::OspfPassive, e.router, e.iface);
                if (i->ospfPassive) p.spans = {i->passiveSpan};
                p.absent = !i->ospfPassive;
                if (p.absent) p.suggestion = "ospf passive under interface " + e.iface;
                p.sites = {e.router + "|iface|" + e.iface + "|passive"};
                parts.push_back(tm().mkNot(boolConfig(std::move(p), i->ospfPassive)));
            }
            if (costUsed_) {
                ConfigVar c = makeVar(VarKind::OspfCost, e.router, e.iface);
                if (i->ospfCost) c.spans = {i->costSpan};
                c.absent = !i->ospfCost;
                if (c.absent) c.suggestion = "ospf cost <n> under interface " + e.iface;
                c.sites = {e.router + "|iface|" + e.iface + "|cost"};
                std::uint64_t cost = static_cast<std::uint64_t>(semantics::ospfCost(*i));
                Term t = configVar(std::move(c), w, [&](std::uint32_t tag) { return tm().intConst(cost, w, tag); });
                logic(tm().mkInRange(t, tm().intConst(1, w), tm().intConst(semantics::kMaxOspfCost, w)),
                      "domain " + tm().node(t).name);
                ospfCost_[e] = t;
            } else {
                ospfCost_[e] = tm().intConst(semantics::kDefaultOspfCost, w);
            }
        }
        ospfAdj_[static_cast<int>(li)] = tm().mkAnd(parts);
    }

    const std::string& d = dst_->attach.router;
    if (runsOspf(d)) {
        const auto& r = cfg(d);
        const auto& i = *r.interface(dst_->attach.iface);
        bool on = semantics::runsOspf(r, i);
        ConfigVar v = makeVar(VarKind::OspfOriginate, d, dst_->name);
        if (on) v.spans = {r.ospf->covering(*i.prefix)->span};
        v.absent = !on;
        if (!on) v.suggestion = "router ospf network " + dst_->prefix.str();
        v.sites = {d + "|ospf-iface|" + dst_->attach.iface};
        ospfOrigin_ = boolConfig(std::move(v), on);
    }
}

void Encoder::bgp() {
    for (std::size_t li = 0; li < topo_.links.size(); ++li) {
        const auto& l = topo_.links[li];
        if (!runsBgp(l.a.router) || !runsBgp(l.b.router)) continue;
        const auto& ra = cfg(l.a.router);
        const auto& rb = cfg(l.b.router);
        const auto* na = ra.bgp->neighbor(l.b.router);
        const auto* nb = rb.bgp->neighbor(l.a.router);
        ConfigVar v = makeVar(VarKind::BgpAdjacency, l.a.router, l.name());
        if (na) v.spans.push_back(na->span);
        if (nb) v.spans.push_back(nb->span);
        v.absent = !(na && nb);
        if (!na) v.router = l.a.router;
        else if (!nb) v.router = l.b.router;
        if (!na) v.suggestion = l.a.router + ": neighbor " + l.b.router + " interface " + l.b.iface;
        if (!nb)
            v.suggestion += (v.suggestion.empty() ? "" : "; ") + l.b.router + ": neighbor " + l.a.router +
                            " interface " + l.a.iface;
        v.sites = {l.a.router + "|bgp-neighbor|" + l.b.router, l.b.router + "|bgp-neighbor|" + l.a.router};
        bgpAdj_[static_cast<int>(li)] = boolConfig(std::move(v), na && nb);

        if (!filtersUsed_) continue;
        for (const auto& [from, to] : {std::pair{&ra, &rb}, std::pair{&rb, &ra}}) {
            ConfigVar f = makeVar(VarKind::RouteFilter, from->name, to->name);
            auto it = from->bgp->filters.find(to->name);
            if (it != from->bgp->filters.end())
                for (const auto& rule : it->second) f.spans.push_back(rule.span);
            f.absent = f.spans.empty();
            if (f.absent) f.suggestion = "filter out " + to->name + " deny " + dst_->prefix.str();
            f.sites = {from->name + "|filter|" + to->name};
            filter_[{from->name, to->name}] =
                boolConfig(std::move(f), semantics::bgpExportPermitted(*from->bgp, to->name, dst_->prefix));
        }
    }

    const std::string& d = dst_->attach.router;
    if (runsBgp(d)) {
        const auto& r = cfg(d);
        const auto* n = r.bgp->network(dst_->prefix);
        ConfigVar v = makeVar(VarKind::BgpOriginate, d, dst_->name);
        if (n) v.spans = {n->span};
        v.absent = n == nullptr;
        if (!n) v.suggestion = "router bgp network " + dst_->prefix.str();
        v.sites = {d + "|bgp-origin|" + dst_->name};
        bgpOrigin_ = boolConfig(std::move(v), n != nullptr);
    }
}

void Encoder::statics() {
    if (!staticUsed_) return;
    for (const auto& r : cs_.routers) {
        const auto& c = cfg(r);
        for (const auto& nh : topo_.neighbors(r)) {
            ConfigVar v = makeVar(VarKind::StaticRoute, r, nh);
            for (const auto& s : c.staticRoutes)
                if (s.nextHop == nh && s.dst.contains(dst_->prefix)) v.spans.push_back(s.span);
            v.absent = v.spans.empty();
            if (v.absent) v.suggestion = "ip route " + dst_->prefix.str() + " next-hop " + nh;
            v.sites = {r + "|static|" + nh};
            static_[{r, nh}] = boolConfig(std::move(v), semantics::staticRouteVia(c, nh, dst_->prefix));
        }
    }
}

Best Encoder::select(const std::string& router, const std::string& proto, const std::vector<Candidate>& cands,
                     Term valid, Term cost) {
    Best b{valid, cost, {}};
    std::vector<Term> any;
    for (const auto& c : cands) any.push_back(c.valid);
    logic(tm().mkIff(valid, tm().mkOr(any)), proto + " valid(" + router + ")");
    for (std::size_t i = 0; i < cands.size(); ++i) {
        std::vector<Term> conds{cands[i].valid};
        for (std::size_t j = 0; j < cands.size(); ++j) {
            if (j == i) continue;
            Term better = j < i ? tm().mkUlt(cands[i].cost, cands[j].cost) : tm().mkUle(cands[i].cost, cands[j].cost);
            conds.push_back(tm().mkOr({tm().mkNot(cands[j].valid), better}));
        }
        Term sel = define(proto + ".sel(" + router + "<-" + cands[i].neighbor + ")", tm().mkAnd(conds));
        logic(tm().mkImplies(sel, tm().mkEq(cost, cands[i].cost)), proto + " cost(" + router + ")");
        b.selected.emplace_back(cands[i].neighbor, sel);
    }
    logic(tm().mkImplies(valid, tm().mkUle(cost, bound_)), proto + " bound(" + router + ")");
    return b;
}

void Encoder::routing() {
    const unsigned w = cs_.costWidth;
    const std::string& d = dst_->attach.router;
    std::map<std::string, Best> ospfBest, bgpBest;
    for (const auto& r : cs_.routers) {
        if (runsOspf(r))
            cs_.bestOspf[r] = {boolSym("ospf.valid(" + r + ")"), intSym("ospf.cost(" + r + ")", w)};
        if (runsBgp(r))
            cs_.bestBgp[r] = {boolSym("bgp.valid(" + r + ")"), intSym("bgp.length(" + r + ")", w)};
    }
    Term f = tm().boolConst(false);
    Term originO = d.empty() || !ospfOrigin_.valid() ? f : tm().mkAnd({ospfOrigin_, connected_});
    Term originB = !bgpOrigin_.valid() ? f : tm().mkAnd({bgpOrigin_, connected_});

    for (const auto& r : cs_.routers) {
        std::vector<Candidate> oc, bc;
        for (const auto& n : topo_.neighbors(r)) {
            int li = topo_.linkBetween(r, n);
            const auto& l = topo_.links[li];
            if (ospfAdj_.count(li)) {
                const auto& nb = cs_.bestOspf.at(n);
                Term c = ospfCost_.at(l.side(n));
                Term origin = n == d ? originO : f;
                Term exportValid = tm().mkOr({origin, nb.valid});
                Term exportCost = tm().mkIte(origin, c, tm().mkAdd(nb.cost, c));
                oc.push_back({n, tm().mkAnd({linkUp(li), ospfAdj_.at(li), exportValid}), exportCost});
            }
            if (bgpAdj_.count(li)) {
                const auto& nb = cs_.bestBgp.at(n);
                Term origin = n == d ? originB : f;
                auto fi = filter_.find({n, r});
                Term permitted = fi == filter_.end() ? tm().boolConst(true) : fi->second;
                Term exportValid = tm().mkAnd({tm().mkOr({origin, nb.valid}), permitted});
                Term exportLen = tm().mkIte(origin, tm().intConst(1, w), tm().mkAddConst(nb.cost, 1));
                bc.push_back({n, tm().mkAnd({linkUp(li), bgpAdj_.at(li), exportValid}), exportLen});
            }
        }
        if (runsOspf(r)) ospfBest[r] = select(r, "ospf", oc, cs_.bestOspf[r].valid, cs_.bestOspf[r].cost);
        if (runsBgp(r)) bgpBest[r] = select(r, "bgp", bc, cs_.bestBgp[r].valid, cs_.bestBgp[r].cost);
    }

    // Cross-protocol choice: groups in preference order, the first valid one wins.
    for (const auto& r : cs_.routers) {
        const auto neighbors = topo_.neighbors(r);
        std::map<std::string, std::vector<Term>> via;  // next hop -> reasons
        std::vector<Term> toT;
        Term taken = f;
        auto group = [&](Term valid) {
            Term chosen = tm().mkAnd({valid, tm().mkNot(taken)});
            taken = tm().mkOr({taken, valid});
            return chosen;
        };

        if (r == d) toT.push_back(group(connected_));

        std::vector<Term> staticValid;
        Term earlier = f;
        std::vector<std::pair<std::string, Term>> staticPick;
        for (const auto& nh : neighbors) {
            auto it = static_.find({r, nh});
            if (it == static_.end()) continue;
            Term v = tm().mkAnd({it->second, linkUp(topo_.linkBetween(r, nh))});
            staticPick.emplace_back(nh, tm().mkAnd({v, tm().mkNot(earlier)}));
            earlier = tm().mkOr({earlier, v});
        }
        Term staticChosen = group(earlier);
        for (const auto& [nh, pick] : staticPick) via[nh].push_back(tm().mkAnd({staticChosen, pick}));

        auto bgpGroup = [&](bool ebgp) {
            auto it = bgpBest.find(r);
            if (it == bgpBest.end()) return;
            std::vector<std::pair<std::string, Term>> sels;
            std::vector<Term> any;
            for (const auto& [nh, sel] : it->second.selected) {
                if (semantics::isEbgp(cfg(r), cfg(nh)) != ebgp) continue;
                sels.emplace_back(nh, sel);
                any.push_back(sel);
            }
            if (sels.empty()) return;
            Term chosen = group(tm().mkOr(any));
            for (const auto& [nh, sel] : sels) via[nh].push_back(tm().mkAnd({chosen, sel}));
        };
        bgpGroup(true);
        if (auto it = ospfBest.find(r); it != ospfBest.end() && !it->second.selected.empty()) {
            std::vector<Term> any;
            for (const auto& [nh, sel] : it->second.selected) any.push_back(sel);
            Term chosen = group(tm().mkOr(any));
            for (const auto& [nh, sel] : it->second.selected) via[nh].push_back(tm().mkAnd({chosen, sel}));
        }
        bgpGroup(false);

        if (r == d) cs_.ribNext[{r, "T"}] = define("rib(" + r + "->T)", tm().mkOr(toT));
        for (const auto& nh : neighbors) cs_.ribNext[{r, nh}] = define("rib(" + r + "->" + nh + ")", tm().mkOr(via[nh]));
    }
}

void Encoder::forwarding() {
    using net::Direction;
    const std::string& d = dst_->attach.router;
    for (const auto& r : cs_.routers) {
        for (const auto& nh : topo_.neighbors(r)) {
            int li = topo_.linkBetween(r, nh);
            const auto& l = topo_.links[li];
            Term f = tm().mkAnd({cs_.ribNext.at({r, nh}), linkUp(li), acl(l.side(r), Direction::Out),
                                 acl(l.side(nh), Direction::In)});
            cs_.fwdVars[{r, nh}] = define("fwd(" + r + "->" + nh + ")", f);
        }
        if (r == d)
            cs_.fwdVars[{r, "T"}] = define("fwd(" + r + "->T)", tm().mkAnd({cs_.ribNext.at({r, "T"}),
                                                                           acl(dst_->attach, Direction::Out)}));
    }

    // Paths visit each router at most once, so depth |routers| suffices.
    std::map<std::string, Term> level;
    for (const auto& r : cs_.routers) level[r] = r == d ? cs_.fwdVars.at({r, "T"}) : tm().boolConst(false);
    for (std::size_t depth = 1; depth < cs_.routers.size(); ++depth) {
        std::map<std::string, Term> next;
        for (const auto& r : cs_.routers) {
            std::vector<Term> ways;
            if (r == d) ways.push_back(cs_.fwdVars.at({r, "T"}));
            for (const auto& nh : topo_.neighbors(r)) ways.push_back(tm().mkAnd({cs_.fwdVars.at({r, nh}), level[nh]}));
            next[r] = tm().mkOr(ways);
        }
        level = std::move(next);
    }
    for (const auto& r : cs_.routers) cs_.reachVars[r] = define("reach(" + r + ")", level[r]);

    const Endpoint& s = src_->attach;
    cs_.reachSource = define("reach(S)", tm().mkAnd({up(s), l3Attach_.at(s), acl(s, net::Direction::In),
                                                     cs_.reachVars.at(s.router)}));
}

void Encoder::requirement() {
    Term ok = cs_.requirement.kind == req::Kind::Reachable ? cs_.reachSource : tm().mkNot(cs_.reachSource);
    cs_.requirementLabel = cs_.system->add(ok, Category::Requirement, cs_.requirement.id);
    cs_.negatedRequirement = cs_.system->add(tm().mkNot(ok), Category::Requirement, "not " + cs_.requirement.id);
}

void Encoder::cardinality(int k) {
    const auto& x = cs_.failVars;
    const std::size_t n = x.size();
    if (n == 0 || static_cast<std::size_t>(k) >= n) return;
    if (k == 0) {
        std::vector<Term> none;
        for (Term v : x) none.push_back(tm().mkNot(v));
        logic(tm().mkAnd(none), "at most 0 failures");
        return;
    }
    // Sequential counter: s[i][j] holds when at least j+1 of x[0..i] are set.
    std::vector<std::vector<Term>> s(n - 1, std::vector<Term>(k));
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (int j = 0; j < k; ++j) s[i][j] = boolSym("count(" + std::to_string(i) + "," + std::to_string(j) + ")");
    std::vector<Term> cl;
    auto imp = [&](std::initializer_list<Term> lhs, Term rhs) {
        cl.push_back(tm().mkImplies(tm().mkAnd(lhs), rhs));
    };
    Term f = tm().boolConst(false);
    imp({x[0]}, s[0][0]);
    for (int j = 1; j < k; ++j) cl.push_back(tm().mkNot(s[0][j]));
    for (std::size_t i = 1; i + 1 < n; ++i) {
        imp({x[i]}, s[i][0]);
        imp({s[i - 1][0]}, s[i][0]);
        for (int j = 1; j < k; ++j) {
            imp({x[i], s[i - 1][j - 1]}, s[i][j]);
            imp({s[i - 1][j]}, s[i][j]);
        }
        imp({x[i], s[i - 1][k - 1]}, f);
    }
    imp({x[n - 1], s[n - 2][k - 1]}, f);
    logic(tm().mkAnd(cl), "at most " + std::to_string(k) + " failures");
}

void Encoder::run(int maxFailures) {
    auto diags = net::validate(net_);
    for (const auto& dg : diags)
        if (dg.severity == net::Severity::Error) throw SemanticError(dg.str());
    src_ = topo_.subnet(cs_.requirement.src);
    dst_ = topo_.subnet(cs_.requirement.dst);
    if (!src_ || !dst_) throw SemanticError("requirement " + cs_.requirement.id + ": unknown subnet");
    cs_.traffic = {src_->prefix, dst_->prefix};
    cs_.routers = topo_.routers;
    cs_.links = topo_.links;
    cs_.srcRouter = src_->attach.router;
    cs_.dstRouter = dst_->attach.router;
    checkSupported();

    const std::uint64_t maxCost = costUsed_ ? semantics::kMaxOspfCost : semantics::kDefaultOspfCost;
    const std::uint64_t routers = cs_.routers.size();
    cs_.costWidth = (routers + 2) * maxCost < 65536 ? 16 : 32;
    bound_ = tm().intConst(routers * maxCost, cs_.costWidth);

    cs_.srcAddr = intSym("packet.src", 32);
    cs_.dstAddr = intSym("packet.dst", 32);
    logic(tm().mkAnd({tm().mkInRange(cs_.srcAddr, tm().intConst(src_->prefix.first(), 32),
                                     tm().intConst(src_->prefix.last(), 32)),
                      tm().mkInRange(cs_.dstAddr, tm().intConst(dst_->prefix.first(), 32),
                                     tm().intConst(dst_->prefix.last(), 32))}),
          "packet in " + src_->name + " -> " + dst_->name);

    interfaces();
    acls();
    ospf();
    bgp();
    statics();
    routing();
    forwarding();
    requirement();
    cardinality(maxFailures);
}

}  // namespace

ConstraintSystem encode(const net::Network& network, const req::Requirement& requirement,
                        const EncodeOptions& options) {
    ConstraintSystem cs;
    cs.requirement = requirement;
    cs.maxFailures = options.maxFailuresOverride >= 0 ? options.maxFailuresOverride : requirement.maxFailures;
    Encoder(network, cs).run(cs.maxFailures);
    return cs;
}

std::vector<std::string> auditSeparation(const ConstraintSystem& cs) {
    std::vector<std::string> out;
    const auto& sys = *cs.system;
    const auto& tm = sys.terms();
    std::set<std::uint32_t> configTerms;
    for (const auto& v : cs.configVars) configTerms.insert(v.term.id);
    std::set<LabelId> bindings;
    for (const auto& v : cs.configVars)
        if (!bindings.insert(v.binding).second) out.push_back(v.key + ": binding shared with another variable");

    for (LabelId id : sys.allLabels()) {
        const auto& label = sys.label(id);
        const ConfigVar* owner = cs.varForLabel(id);
        if (label.category == Category::Config && !owner)
            out.push_back("configuration label " + std::to_string(id) + " has no variable");
        bool ownerSeen = false;
        tm.visit(sys.formula(id), [&](Term t, const smt::Node& n) {
            bool isConst = n.op == smt::Op::BoolConst || n.op == smt::Op::IntConst;
            bool isVar = n.op == smt::Op::BoolVar || n.op == smt::Op::IntVar;
            if (isConst && n.tag != 0) {
                if (label.category != Category::Config)
                    out.push_back(std::string("label ") + std::to_string(id) + " (" + smt::categoryName(label.category) +
                                  ") contains a constant from " + cs.configVars[n.tag - 1].key);
                else if (owner && n.tag - 1 != cs.varOfBinding.at(id))
                    out.push_back("binding of " + owner->key + " contains a constant from " +
                                  cs.configVars[n.tag - 1].key);
            }
            if (isVar) {
                if (!cs.symbols.count(t.id)) out.push_back("unknown symbol " + n.name + " in label " + std::to_string(id));
                if (label.category == Category::Config && configTerms.count(t.id)) {
                    if (owner && t == owner->term) ownerSeen = true;
                    else out.push_back("configuration label " + std::to_string(id) + " mentions " + n.name);
                }
            }
        });
        if (owner && !ownerSeen) out.push_back("binding of " + owner->key + " does not mention its variable");
    }
    return out;
}

}  // namespace cfgloc::enc
