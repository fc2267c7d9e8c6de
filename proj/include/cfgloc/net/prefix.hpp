#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cfgloc::net {

std::optional<std::uint32_t> parseAddress(std::string_view text);
std::string formatAddress(std::uint32_t address);

// IPv4 prefix with host bits cleared.
struct Prefix {
    std::uint32_t address = 0;
    int length = 0;

    static Prefix any() { return Prefix{}; }
    // Accepts "A.B.C.D/L". With `strict`, host bits must be zero; otherwise
    // they are cleared.
    static std::optional<Prefix> parse(std::string_view text, bool strict = true);

    std::uint32_t netmask() const { return length == 0 ? 0u : ~0u << (32 - length); }
    std::uint32_t first() const { return address; }
    std::uint32_t last() const { return address | ~netmask(); }
    bool contains(std::uint32_t a) const { return (a & netmask()) == address; }
    bool contains(const Prefix& p) const { return p.length >= length && contains(p.address); }
    bool overlaps(const Prefix& p) const { return contains(p) || p.contains(*this); }
    bool isAny() const { return length == 0; }

    std::string str() const;

    bool operator==(const Prefix&) const = default;
    auto operator<=>(const Prefix&) const = default;
};

}  // namespace cfgloc::net
