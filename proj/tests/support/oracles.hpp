#pragma once

#include <algorithm>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "cfgloc/enc/encoder.hpp"
#include "cfgloc/harness/simulate.hpp"
#include "fixtures.hpp"
#include "pins.hpp"

namespace cfgloc::testing {

// Failure sets within the requirement's budget under which some packet of the
// traffic class violates it, by simulation.
inline std::set<std::vector<int>> violatingAssignments(const Fixture& fx, const req::Requirement& req) {
    std::set<std::vector<int>> out;
    int links = static_cast<int>(fx.network.topology.links.size());
    auto tc = req::trafficClass(req, fx.network.topology);
    auto packets = harness::representativePackets(fx.network, tc.src, tc.dst);
    for (const auto& failed : subsetsUpTo(links, req.maxFailures)) {
        for (const auto& [s, t] : packets) {
            bool delivered = harness::simulate(fx.network, req.src, req.dst, failed, s, t).delivered;
            if (delivered != (req.kind == req::Kind::Reachable)) {
                out.insert(std::vector<int>(failed.begin(), failed.end()));
                break;
            }
        }
    }
    return out;
}

struct Equivalence {
    int compared = 0;  // (requirement, failure set, packet) triples
    std::vector<std::string> mismatches;
};

// Pins every failure set of at most maxFailures links and every
// representative packet, then compares the encoder's route choice, forwarding
// and reachability with the simulator.
inline Equivalence compareWithSimulator(const Fixture& fx, int maxFailures = 2) {
    Equivalence out;
    int links = static_cast<int>(fx.network.topology.links.size());
    for (const auto& req : fx.requirements) {
        enc::EncodeOptions opts;
        opts.maxFailuresOverride = std::min(maxFailures, links);
        auto cs = enc::encode(fx.network, req, opts);
        Pins pins(cs);
        auto packets = harness::representativePackets(fx.network, cs.traffic.src, cs.traffic.dst);
        for (const auto& failed : subsetsUpTo(links, opts.maxFailuresOverride)) {
            for (const auto& [s, t] : packets) {
                ++out.compared;
                auto labels = cs.logic;
                labels.insert(labels.end(), cs.config.begin(), cs.config.end());
                auto f = pins.failures(failed);
                labels.insert(labels.end(), f.begin(), f.end());
                labels.push_back(pins.packet(s, t));
                std::ostringstream where;
                where << req.id << " failed={";
                for (int l : failed) where << ' ' << fx.network.topology.links[l].name();
                where << " } packet " << s << "->" << t << ": ";
                auto r = cs.system->check(labels);
                if (r.status != smt::CheckStatus::Sat) {
                    out.mismatches.push_back(where.str() + "pinned system is not satisfiable");
                    continue;
                }
                auto sim = harness::simulate(fx.network, req.src, req.dst, failed, s, t);
                for (const auto& [key, var] : cs.ribNext)
                    if (r.model.boolean(var) != (sim.nextHop.at(key.first) == key.second))
                        out.mismatches.push_back(where.str() + "rib " + key.first + "->" + key.second);
                for (const auto& [key, var] : cs.fwdVars)
                    if (r.model.boolean(var) != (sim.forwards.count(key) == 1))
                        out.mismatches.push_back(where.str() + "fwd " + key.first + "->" + key.second);
                for (const auto& [router, var] : cs.reachVars)
                    if (r.model.boolean(var) != sim.reaches.at(router))
                        out.mismatches.push_back(where.str() + "reach " + router);
                if (r.model.boolean(cs.reachSource) != sim.delivered)
                    out.mismatches.push_back(where.str() + "delivery");
            }
        }
    }
    return out;
}

// Bundled fixtures with at most six routers.
inline const std::vector<std::string>& smallFixtures() {
    static const std::vector<std::string> names{"static_acl", "ospf_acl", "ospf_acl_inbound", "ospf_adjacency", "triangle_ok", "pair",
                                                "pair_filter", "single", "campus", "campus_ce2", "campus_ce3"};
    return names;
}

}  // namespace cfgloc::testing
