#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cfgloc/enc/encoder.hpp"

namespace cfgloc::fail {

// One violating failure assignment, or a class of assignments with the same
// forwarding fingerprint represented by its first member.
struct Scenario {
    int id = 0;
    std::vector<int> failedLinks;  // indices into ConstraintSystem::links, sorted
    std::uint32_t srcAddr = 0;     // violating packet found with the scenario
    std::uint32_t dstAddr = 0;
    std::string fingerprint;
    std::uint64_t fingerprintHash = 0;
    std::vector<std::vector<int>> members;  // every assignment in the class, this one first

    std::string describe(const enc::ConstraintSystem& cs) const;  // "{r1-r3}" or "{}"
};

struct EnumerateOptions {
    bool dedup = true;
    double timeBudgetSeconds = -1;  // negative: unlimited
    std::ostream* log = nullptr;    // one JSON line per counterexample
};

struct Enumeration {
    std::vector<Scenario> scenarios;
    bool complete = true;
    std::size_t iterations = 0;  // counterexamples found
};

// Checks C, L and the negated requirement, blocks each counterexample's
// failure assignment and repeats until unsatisfiable. Blocking clauses live in
// their own labels and are not part of ConstraintSystem::logic.
Enumeration enumerateViolations(enc::ConstraintSystem& cs, const EnumerateOptions& options = {});

// Canonical rendering of the route choice, forwarding and delivery bits of the
// routers on the packet's route from the source.
std::string fingerprint(const enc::ConstraintSystem& cs, const smt::Model& model);

// Adds F labels fixing every failure variable and the violating packet.
// Throws InternalError unless C, L, R and F together are unsatisfiable.
std::vector<smt::LabelId> pinScenario(enc::ConstraintSystem& cs, const Scenario& scenario);

}  // namespace cfgloc::fail
