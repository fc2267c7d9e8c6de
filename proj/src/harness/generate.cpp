#include "cfgloc/harness/generate.hpp"

#include <fstream>

#include <json.hpp>

#include "cfgloc/error.hpp"
#include "cfgloc/net/parse.hpp"

namespace cfgloc::harness {

using ojson = nlohmann::ordered_json;

net::Network Generated::network() const { return net::buildNetwork(files, topology); }

std::vector<req::Requirement> Generated::parsedRequirements(const net::Topology& topo) const {
    return req::parseRequirements(requirements, topo);
}

void Generated::write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir / "configs");
    auto put = [](const std::filesystem::path& p, const std::string& text) {
        std::ofstream out(p);
        if (!out) throw Error("cannot write " + p.string());
        out << text;
    };
    for (const auto& [name, text] : files) put(dir / "configs" / name, text);
    put(dir / "topology.json", topology);
    put(dir / "requirements.json", requirements);
}

namespace {

struct Builder {
    ojson routers = ojson::array();
    ojson links = ojson::array();
    ojson subnets = ojson::object();

    void link(const std::string& a, const std::string& b) { links.push_back({a, b}); }
    void subnet(const std::string& name, const std::string& prefix, const std::string& attach) {
        subnets[name] = {{"prefix", prefix}, {"attach", attach}};
    }
    std::string topology() const {
        return ojson{{"routers", routers}, {"links", links}, {"subnets", subnets}}.dump(2) + "\n";
    }
};

std::string iface(const std::string& name, const std::string& ip) {
    return "interface " + name + "\n ip " + ip + "\n!\n";
}

std::string allPairs(const std::string& id, const std::vector<std::string>& lans, int k) {
    ojson r = ojson::array();
    r.push_back({{"id", id}, {"kind", "reachable"}, {"src", lans}, {"dst", lans}, {"maxFailures", k}});
    return r.dump(2) + "\n";
}

}  // namespace

Generated generateRing(int n) {
    if (n < 3 || n > 64) throw Error("ring size must be between 3 and 64");
    Generated g{"ring", n, {}, {}, {}};
    Builder b;
    std::vector<std::string> lans;
    auto name = [](int i) { return "r" + std::to_string(i); };
    for (int i = 1; i <= n; ++i) {
        int prev = i == 1 ? n : i - 1;
        std::string r = name(i);
        std::string text = "hostname " + r + "\n!\n";
        text += iface("eth0", "10.0." + std::to_string(i) + ".1/24");
        text += iface("eth1", "172.16." + std::to_string(i) + ".1/30");
        text += iface("eth2", "172.16." + std::to_string(prev) + ".2/30");
        text += "router ospf\n";
        text += " network 10.0." + std::to_string(i) + ".0/24\n";
        text += " network 172.16." + std::to_string(i) + ".0/30\n";
        text += " network 172.16." + std::to_string(prev) + ".0/30\n";
        text += "!\n";
        g.files.emplace_back(r + ".cfg", text);
        b.routers.push_back(r);
        b.link(r + ".eth1", name(i == n ? 1 : i + 1) + ".eth2");
        std::string lan = "lan" + std::to_string(i);
        b.subnet(lan, "10.0." + std::to_string(i) + ".0/24", r + ".eth0");
        lans.push_back(lan);
    }
    g.topology = b.topology();
    g.requirements = allPairs("ring", lans, 1);
    return g;
}

Generated generateTree(int levels) {
    if (levels < 2 || levels > 6) throw Error("tree depth must be between 2 and 6 levels");
    int n = (1 << levels) - 1;
    Generated g{"tree", n, {}, {}, {}};
    Builder b;
    std::vector<std::string> lans;
    auto name = [](int i) { return "t" + std::to_string(i); };
    // Node i links to its parent over eth3 and to children 2i, 2i+1 over eth1
    // and eth2; the link to child c uses 172.17.c.0/30.
    for (int i = 1; i <= n; ++i) {
        std::string r = name(i);
        std::string lan = "10.1." + std::to_string(i) + ".0/24";
        std::string text = "hostname " + r + "\n!\n";
        text += iface("eth0", "10.1." + std::to_string(i) + ".1/24");
        std::string bgp = "router bgp " + std::to_string(65000 + i) + "\n";
        for (int c : {2 * i, 2 * i + 1}) {
            if (c > n) continue;
            std::string own = c % 2 == 0 ? "eth1" : "eth2";
            text += iface(own, "172.17." + std::to_string(c) + ".1/30");
            bgp += " neighbor " + name(c) + " interface eth3\n";
            b.link(r + "." + own, name(c) + ".eth3");
        }
        if (i > 1) {
            text += iface("eth3", "172.17." + std::to_string(i) + ".2/30");
            bgp += " neighbor " + name(i / 2) + " interface " + (i % 2 == 0 ? "eth1" : "eth2") + "\n";
        }
        bgp += " network " + lan + "\n!\n";
        g.files.emplace_back(r + ".cfg", text + bgp);
        b.routers.push_back(r);
        b.subnet("lan" + std::to_string(i), lan, r + ".eth0");
        lans.push_back("lan" + std::to_string(i));
    }
    g.topology = b.topology();
    g.requirements = allPairs("tree", lans, 0);
    return g;
}

Generated generateCampus() {
    Generated g{"campus", 5, {}, {}, {}};
    const std::string deptFilter =
        "access-list deptFilter permit src 1.0.1.0/24 dst any\n"
        "access-list deptFilter permit src 1.0.2.0/24 dst any\n"
        "access-list deptFilter permit src 1.0.3.0/24 dst any\n";
    g.files = {
        {"core1.cfg", "hostname core1\n!\n" + iface("eth0", "172.16.1.2/30") + iface("eth1", "172.16.12.1/30") +
                          iface("eth2", "172.16.13.1/30") + iface("eth3", "1.0.1.1/24") +
                          iface("eth4", "1.0.9.1/24") +
                          "router ospf\n network 172.16.12.0/30\n network 172.16.13.0/30\n network 1.0.1.0/24\n"
                          " network 1.0.9.0/24\n!\n"
                          "router bgp 200\n neighbor edge interface eth1\n neighbor core2 interface eth0\n"
                          " neighbor core3 interface eth0\n network 1.0.1.0/24\n!\n"},
        {"core2.cfg", "hostname core2\n!\n" + iface("eth0", "172.16.12.2/30") +
                          "interface eth1\n ip 172.16.23.1/30\n ip access-group deptFilter out\n!\n" +
                          iface("eth2", "1.0.2.1/24") + iface("eth3", "1.0.8.1/24") +
                          "router ospf\n network 172.16.12.0/30\n network 172.16.23.0/30\n network 1.0.2.0/24\n"
                          " network 1.0.8.0/24\n!\n"
                          "router bgp 200\n neighbor core1 interface eth1\n network 1.0.2.0/24\n!\n" +
                          deptFilter},
        {"core3.cfg", "hostname core3\n!\n" + iface("eth0", "172.16.13.2/30") +
                          "interface eth1\n ip 172.16.23.2/30\n ip access-group deptFilter out\n!\n" +
                          iface("eth2", "1.0.3.1/24") +
                          "router ospf\n network 172.16.13.0/30\n network 172.16.23.0/30\n network 1.0.3.0/24\n!\n"
                          "router bgp 200\n neighbor core1 interface eth2\n network 1.0.3.0/24\n!\n" +
                          deptFilter},
        {"edge.cfg", "hostname edge\n!\n" + iface("eth0", "172.16.0.2/30") +
                         "interface eth1\n ip 172.16.1.1/30\n ip access-group edgeFilter out\n!\n"
                         "router bgp 200\n neighbor provider interface eth0\n neighbor core1 interface eth0\n!\n"
                         "access-list edgeFilter permit src any dst 1.0.1.0/24\n"
                         "access-list edgeFilter permit src any dst 1.0.2.0/24\n"
                         "access-list edgeFilter permit src any dst 1.0.3.0/24\n"},
        {"provider.cfg", "hostname provider\n!\n" + iface("eth0", "172.16.0.1/30") + iface("eth1", "8.8.8.1/24") +
                             "router bgp 100\n neighbor edge interface eth0\n network 8.8.8.0/24\n!\n"},
    };
    Builder b;
    for (const char* r : {"provider", "edge", "core1", "core2", "core3"}) b.routers.push_back(r);
    b.link("provider.eth0", "edge.eth0");
    b.link("edge.eth1", "core1.eth0");
    b.link("core1.eth1", "core2.eth0");
    b.link("core1.eth2", "core3.eth0");
    b.link("core2.eth1", "core3.eth1");
    b.subnet("ext", "8.8.8.0/24", "provider.eth1");
    b.subnet("dept1", "1.0.1.0/24", "core1.eth3");
    b.subnet("mgmt", "1.0.9.0/24", "core1.eth4");
    b.subnet("dept2", "1.0.2.0/24", "core2.eth2");
    b.subnet("guest", "1.0.8.0/24", "core2.eth3");
    b.subnet("dept3", "1.0.3.0/24", "core3.eth2");
    g.topology = b.topology();
    std::vector<std::string> depts{"dept1", "dept2", "dept3"};
    ojson reqs = ojson::array();
    reqs.push_back({{"id", "ext-dept"}, {"kind", "reachable"}, {"src", "ext"}, {"dst", depts}, {"maxFailures", 0}});
    reqs.push_back({{"id", "dept"}, {"kind", "reachable"}, {"src", depts}, {"dst", depts}, {"maxFailures", 1}});
    reqs.push_back({{"id", "ext-mgmt"}, {"kind", "blocked"}, {"src", "ext"}, {"dst", "mgmt"}, {"maxFailures", 0}});
    reqs.push_back(
        {{"id", "guest-dept3"}, {"kind", "blocked"}, {"src", "guest"}, {"dst", "dept3"}, {"maxFailures", 0}});
    g.requirements = reqs.dump(2) + "\n";
    return g;
}

Generated generate(const std::string& kind, int n) {
    if (kind == "ring") return generateRing(n);
    if (kind == "tree") return generateTree(n);
    if (kind == "campus") return generateCampus();
    throw Error("unknown topology kind '" + kind + "' (expected ring, tree or campus)");
}

}  // namespace cfgloc::harness
