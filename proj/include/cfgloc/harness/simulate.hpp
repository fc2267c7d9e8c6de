#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cfgloc/net/model.hpp"
#include "cfgloc/req/requirements.hpp"

namespace cfgloc::harness {

enum class Drop { None, NoRoute, Acl, Loop, SourceDown };
const char* dropName(Drop d);

// Converged forwarding of one packet toward one destination subnet.
struct SimResult {
    // Chosen next hop per router: a neighbor name, "T" for local delivery, or
    // empty when the router has no route.
    std::map<std::string, std::string> nextHop;
    // Forwarding decisions that pass both ACLs; target is a router or "T".
    std::set<std::pair<std::string, std::string>> forwards;
    std::map<std::string, bool> reaches;  // router -> packet delivered from there
    bool delivered = false;               // entering at the source subnet
    std::vector<std::string> path;        // routers visited from the source
    Drop drop = Drop::None;
};

// `failed` holds indices into network.topology.links.
SimResult simulate(const net::Network& network, const std::string& srcSubnet, const std::string& dstSubnet,
                   const std::set<int>& failed, std::uint32_t srcAddr, std::uint32_t dstAddr);

// One address per region of the source and destination prefixes that the
// network's ACLs treat uniformly; simulating each pair covers every packet.
std::vector<std::pair<std::uint32_t, std::uint32_t>> representativePackets(const net::Network& network,
                                                                           const net::Prefix& src,
                                                                           const net::Prefix& dst);

// Ids of the requirements that some failure set within their budget and some
// packet of their traffic class violate, by simulation.
std::vector<std::string> simulatedViolations(const net::Network& network,
                                             const std::vector<req::Requirement>& requirements);

}  // namespace cfgloc::harness
