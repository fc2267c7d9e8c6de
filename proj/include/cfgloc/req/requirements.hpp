#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cfgloc/net/model.hpp"

namespace cfgloc::req {

enum class Kind { Reachable, Blocked };
const char* kindName(Kind k);

struct Requirement {
    std::string id;
    Kind kind = Kind::Reachable;
    std::string src;  // subnet names
    std::string dst;
    int maxFailures = 0;
};

struct TrafficClass {
    net::Prefix src;
    net::Prefix dst;
};

TrafficClass trafficClass(const Requirement& r, const net::Topology& topo);

// JSON array of {id, kind: reachable|blocked, src, dst, maxFailures}. `src`
// and `dst` may also be arrays of subnet names; such an entry expands to one
// requirement per ordered pair of distinct subnets, with ids "ID:SRC->DST".
std::vector<Requirement> parseRequirements(std::string_view doc, const net::Topology& topo);

}  // namespace cfgloc::req
