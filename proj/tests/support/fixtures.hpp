#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cfgloc/net/parse.hpp"
#include "cfgloc/req/requirements.hpp"

namespace cfgloc::testing {

struct Fixture {
    net::Network network;
    std::vector<req::Requirement> requirements;

    const req::Requirement& requirement(const std::string& id) const {
        for (const auto& r : requirements)
            if (r.id == id) return r;
        throw std::runtime_error("no requirement " + id);
    }
};

inline std::filesystem::path fixtureDir(const std::string& name) {
    return std::filesystem::path(CFGLOC_FIXTURES) / name;
}

inline Fixture loadFixture(const std::string& name) {
    auto dir = fixtureDir(name);
    Fixture f;
    f.network = net::loadNetwork(dir / "configs", dir / "topology.json");
    f.requirements = req::parseRequirements(net::readFile(dir / "requirements.json"), f.network.topology);
    return f;
}

}  // namespace cfgloc::testing
