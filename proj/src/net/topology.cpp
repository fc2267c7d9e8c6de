#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cfgloc/error.hpp"
#include "cfgloc/net/parse.hpp"

namespace cfgloc::net {

using json = nlohmann::json;

namespace {

Endpoint endpoint(const json& j, const char* where) {
    if (!j.is_string()) throw SemanticError(std::string(where) + ": expected \"router.interface\"");
    auto s = j.get<std::string>();
    auto dot = s.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == s.size())
        throw SemanticError(std::string(where) + ": malformed endpoint '" + s + "'");
    return Endpoint{s.substr(0, dot), s.substr(dot + 1)};
}

}  // namespace

Topology parseTopology(std::string_view doc) {
    json j;
    try {
        j = json::parse(doc);
    } catch (const json::parse_error& e) {
        throw ParseError("<topology>", 1, static_cast<int>(e.byte), e.what());
    }
    if (!j.is_object()) throw SemanticError("topology: top-level value must be an object");
    Topology t;
    const json routers = j.value("routers", json::array());
    if (routers.is_array()) {
        for (const auto& r : routers) t.routers.push_back(r.get<std::string>());
    } else if (routers.is_object()) {
        for (const auto& [name, ifaces] : routers.items()) {
            t.routers.push_back(name);
            auto& list = t.declaredInterfaces[name];
            for (const auto& i : ifaces) list.push_back(i.get<std::string>());
        }
    } else {
        throw SemanticError("topology: 'routers' must be an array or an object");
    }
    std::sort(t.routers.begin(), t.routers.end());
    if (std::adjacent_find(t.routers.begin(), t.routers.end()) != t.routers.end())
        throw SemanticError("topology: duplicate router name");

    std::vector<std::string> offenders;
    auto checkEndpoint = [&](const Endpoint& e) {
        if (!t.hasRouter(e.router)) {
            offenders.push_back("unknown router '" + e.router + "' in " + e.str());
            return;
        }
        auto it = t.declaredInterfaces.find(e.router);
        if (it != t.declaredInterfaces.end() &&
            std::find(it->second.begin(), it->second.end(), e.iface) == it->second.end())
            offenders.push_back("unknown interface '" + e.str() + "'");
    };

    std::set<Endpoint> used;
    const json links = j.value("links", json::array());
    for (const auto& l : links) {
        if (!l.is_array() || l.size() != 2) throw SemanticError("topology: each link must be a pair of endpoints");
        Link link{endpoint(l[0], "link"), endpoint(l[1], "link")};
        checkEndpoint(link.a);
        checkEndpoint(link.b);
        if (link.a.router == link.b.router) offenders.push_back("self-link at router '" + link.a.router + "'");
        for (const auto& e : {link.a, link.b})
            if (!used.insert(e).second) offenders.push_back("interface '" + e.str() + "' used twice");
        if (t.linkBetween(link.a.router, link.b.router) >= 0)
            offenders.push_back("parallel links between '" + link.a.router + "' and '" + link.b.router +
                                "' are not supported");
        t.links.push_back(link);
    }
    const json subnets = j.value("subnets", json::object());
    for (const auto& [name, s] : subnets.items()) {
        auto p = Prefix::parse(s.value("prefix", ""));
        if (!p) throw SemanticError("topology: subnet '" + name + "' has a malformed prefix");
        Subnet sub{name, *p, endpoint(s.value("attach", json()), "subnet attach")};
        checkEndpoint(sub.attach);
        if (!used.insert(sub.attach).second) offenders.push_back("interface '" + sub.attach.str() + "' used twice");
        t.subnets.push_back(sub);
    }
    std::sort(t.subnets.begin(), t.subnets.end(), [](auto& a, auto& b) { return a.name < b.name; });
    if (!offenders.empty()) {
        std::string msg = "topology:";
        for (const auto& o : offenders) msg += " " + o + ";";
        msg.pop_back();
        throw SemanticError(msg);
    }
    return t;
}

std::vector<Diagnostic> validate(const Network& net) {
    std::vector<Diagnostic> out;
    auto error = [&](std::string msg, Span span = {}) {
        out.push_back(Diagnostic{Severity::Error, std::move(msg), std::move(span)});
    };
    const Topology& topo = net.topology;
    for (const auto& r : topo.routers)
        if (!net.routers.count(r)) error("router '" + r + "' has no configuration");
    for (const auto& [name, cfg] : net.routers) {
        if (!topo.hasRouter(name)) error("router '" + name + "' is not in the topology", cfg.hostnameSpan);
    }
    auto checkIface = [&](const Endpoint& e, const std::string& what) {
        if (net.routers.count(e.router) && !net.interface(e))
            error(what + " names interface '" + e.str() + "' which is not configured");
    };
    for (const auto& l : topo.links) {
        checkIface(l.a, "link " + l.name());
        checkIface(l.b, "link " + l.name());
    }
    for (const auto& s : topo.subnets) {
        checkIface(s.attach, "subnet " + s.name);
        const Interface* i = net.interface(s.attach);
        if (i && i->prefix && *i->prefix != s.prefix)
            error("subnet " + s.name + " (" + s.prefix.str() + ") does not match the address of " + s.attach.str(),
                  i->ipSpan);
    }

    for (const auto& [name, cfg] : net.routers) {
        for (const auto& i : cfg.interfaces) {
            for (auto d : {Direction::In, Direction::Out}) {
                const auto& acl = i.acl(d);
                if (acl && !cfg.acl(*acl))
                    error("access-list '" + *acl + "' applied on " + name + "." + i.name + " is not defined",
                          i.aclSpan(d));
            }
        }
        if (cfg.bgp) {
            for (const auto& n : cfg.bgp->neighbors) {
                if (!topo.hasRouter(n.peer) || !net.routers.count(n.peer)) {
                    error("BGP neighbor '" + n.peer + "' is not a router in the topology", n.span);
                    continue;
                }
                if (!net.routers.at(n.peer).interface(n.peerInterface))
                    error("BGP neighbor interface '" + n.peer + "." + n.peerInterface + "' is not configured", n.span);
                int li = topo.linkBetween(name, n.peer);
                if (li < 0)
                    error("BGP session to '" + n.peer + "' is not over a direct link (multihop is unsupported)",
                          n.span);
                else if (topo.links[li].other(name).iface != n.peerInterface)
                    error("BGP neighbor interface '" + n.peer + "." + n.peerInterface +
                              "' is not the far end of the link",
                          n.span);
            }
            for (const auto& [peer, rules] : cfg.bgp->filters) {
                if (!cfg.bgp->neighbor(peer))
                    error("route filter for '" + peer + "' which is not a BGP neighbor",
                          rules.empty() ? Span{} : rules.front().span);
            }
        }
        for (const auto& s : cfg.staticRoutes) {
            if (!topo.hasRouter(s.nextHop))
                error("static route next hop '" + s.nextHop + "' is not a router in the topology", s.span);
            else if (topo.linkBetween(name, s.nextHop) < 0)
                error("static route next hop '" + s.nextHop + "' is not adjacent", s.span);
        }
    }
    return out;
}

std::string readFile(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Network buildNetwork(const std::vector<std::pair<std::string, std::string>>& files, std::string_view topologyDoc) {
    Network net;
    net.topology = parseTopology(topologyDoc);
    for (const auto& [file, text] : files) {
        RouterConfig cfg = parseConfig(text, file);
        if (net.routers.count(cfg.name)) throw SemanticError(file + ": duplicate router '" + cfg.name + "'");
        std::string name = cfg.name;
        net.routers.emplace(name, std::move(cfg));
    }
    return net;
}

Network loadNetwork(const std::filesystem::path& configDir, const std::filesystem::path& topologyFile) {
    if (!std::filesystem::is_directory(configDir))
        throw Error("config directory '" + configDir.string() + "' does not exist");
    std::vector<std::filesystem::path> paths;
    for (const auto& e : std::filesystem::directory_iterator(configDir))
        if (e.is_regular_file() && e.path().extension() == ".cfg") paths.push_back(e.path());
    std::sort(paths.begin(), paths.end());
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& p : paths) files.emplace_back(p.filename().string(), readFile(p));
    return buildNetwork(files, readFile(topologyFile));
}

}  // namespace cfgloc::net
