#include "cfgloc/net/prefix.hpp"

#include <charconv>

namespace cfgloc::net {

std::optional<std::uint32_t> parseAddress(std::string_view text) {
    std::uint32_t out = 0;
    const char* p = text.data();
    const char* end = text.data() + text.size();
    for (int octet = 0; octet < 4; ++octet) {
        if (octet > 0) {
            if (p == end || *p != '.') return std::nullopt;
            ++p;
        }
        unsigned v = 0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc{} || next == p || next - p > 3 || v > 255) return std::nullopt;
        out = (out << 8) | v;
        p = next;
    }
    if (p != end) return std::nullopt;
    return out;
}

std::string formatAddress(std::uint32_t a) {
    return std::to_string(a >> 24) + "." + std::to_string((a >> 16) & 255) + "." + std::to_string((a >> 8) & 255) +
           "." + std::to_string(a & 255);
}

std::optional<Prefix> Prefix::parse(std::string_view text, bool strict) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    auto addr = parseAddress(text.substr(0, slash));
    if (!addr) return std::nullopt;
    auto lenText = text.substr(slash + 1);
    int len = 0;
    auto [next, ec] = std::from_chars(lenText.data(), lenText.data() + lenText.size(), len);
    if (ec != std::errc{} || next != lenText.data() + lenText.size() || len < 0 || len > 32) return std::nullopt;
    Prefix p{*addr, len};
    if ((p.address & ~p.netmask()) != 0) {
        if (strict) return std::nullopt;
        p.address &= p.netmask();
    }
    return p;
}

std::string Prefix::str() const { return formatAddress(address) + "/" + std::to_string(length); }

}  // namespace cfgloc::net
