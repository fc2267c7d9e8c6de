#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cfgloc/net/model.hpp"

namespace cfgloc::harness {

enum class ErrorType { OmitNw, OmitNb, OmitAcl, OmitAclRule, ExtraAcl };
const char* errorTypeName(ErrorType t);
std::optional<ErrorType> parseErrorType(const std::string& s);

// One erroneous statement group on one device. A finding hits the item when
// one of its entries names one of these sites; sites use the same identities
// as the encoder's configuration variables.
struct GroundTruthItem {
    std::string router;
    std::vector<std::string> sites;
    std::vector<net::Span> spans;  // removed lines (original file) or added lines (mutated file)
};

struct InjectedError {
    ErrorType type = ErrorType::OmitNw;
    std::uint64_t seed = 0;
    std::string description;
    std::vector<GroundTruthItem> items;
};

struct Injection {
    net::Network network;
    InjectedError error;
};

// Applies one error of the given type, chosen with the seed. Modified routers
// are printed and parsed again, so spans in the result refer to the printed
// text. Throws Error when the network has no statement of that type.
//   OmitNw      removes one OSPF or BGP network statement
//   OmitNb      removes a BGP session (both neighbor statements) or an OSPF
//               adjacency (the network statements covering both link ends)
//   OmitAcl     removes one access-group statement
//   OmitAclRule removes one rule from an ACL with at least two rules, and the
//               same rule from every identical copy on other routers
//   ExtraAcl    applies a new ACL denying one subnet to a free interface slot
Injection inject(const net::Network& network, ErrorType type, std::uint64_t seed);

}  // namespace cfgloc::harness
