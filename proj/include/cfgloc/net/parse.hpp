#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "cfgloc/net/model.hpp"

namespace cfgloc::net {

// Parses one router configuration. Unknown statements become warnings on the
// returned config; syntax errors throw ParseError, duplicate interface or ACL
// definitions throw SemanticError.
RouterConfig parseConfig(std::string_view text, const std::string& filename);

// Renders a config in canonical form; parsing the result yields a
// structurally equal config.
std::string printConfig(const RouterConfig& cfg);

// Topology JSON: {"routers": [...] | {router: [iface, ...]},
//                 "links": [["r.if", "r.if"], ...],
//                 "subnets": {name: {"prefix": "A.B.C.D/L", "attach": "r.if"}}}
Topology parseTopology(std::string_view doc);

// Empty iff every cross-reference resolves. Deterministic order.
std::vector<Diagnostic> validate(const Network& network);

// Reads every *.cfg file in `configDir` and the topology file. Throws on
// parse errors; does not validate.
Network loadNetwork(const std::filesystem::path& configDir, const std::filesystem::path& topologyFile);

// Builds a network from in-memory config texts keyed by file name.
Network buildNetwork(const std::vector<std::pair<std::string, std::string>>& files, std::string_view topologyDoc);

std::string readFile(const std::filesystem::path& path);

}  // namespace cfgloc::net
