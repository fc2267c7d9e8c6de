#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "cfgloc/net/model.hpp"
#include "cfgloc/req/requirements.hpp"

namespace cfgloc::harness {

// A generated network in its on-disk form: configuration texts, topology and
// requirements documents.
struct Generated {
    std::string kind;
    int size = 0;  // routers
    std::vector<std::pair<std::string, std::string>> files;  // file name, text
    std::string topology;
    std::string requirements;

    net::Network network() const;
    std::vector<req::Requirement> parsedRequirements(const net::Topology& topology) const;
    // Writes configs/*.cfg, topology.json and requirements.json under dir.
    void write(const std::filesystem::path& dir) const;
};

// OSPF ring of n routers (3..64), each with a LAN; every pair of LANs must
// stay reachable under any single link failure.
Generated generateRing(int n);

// Complete binary tree with the given number of levels (2..6); every router is
// its own eBGP AS with a LAN; every pair of LANs must be reachable.
Generated generateTree(int levels);

// The campus network: provider, edge and three core routers, with the
// edgeFilter and the replicated deptFilter ACLs.
Generated generateCampus();

// kind is ring, tree or campus; n is ignored for campus.
Generated generate(const std::string& kind, int n);

}  // namespace cfgloc::harness
