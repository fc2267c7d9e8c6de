#include <algorithm>
#include <charconv>
#include <set>

#include "cfgloc/error.hpp"
#include "cfgloc/net/parse.hpp"

namespace cfgloc::net {

namespace {

struct Token {
    std::string_view text;
    int column;  // 1-based
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        if (i >= line.size()) break;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        out.push_back(Token{line.substr(start, i - start), static_cast<int>(start) + 1});
    }
    return out;
}

enum class Block { None, Interface, Ospf, Bgp };

class Parser {
public:
    Parser(std::string_view text, const std::string& file) : text_(text), file_(file) { cfg_.file = file; }

    RouterConfig run() {
        std::size_t pos = 0;
        while (pos <= text_.size()) {
            auto nl = text_.find('\n', pos);
            if (nl == std::string_view::npos) nl = text_.size();
            auto line = text_.substr(pos, nl - pos);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            ++lineNo_;
            statement(tokenize(line));
            pos = nl + 1;
        }
        if (block_ != Block::None) unterminated();
        if (cfg_.name.empty()) throw ParseError(file_, 1, 1, "missing 'hostname' statement");
        return std::move(cfg_);
    }

private:
    [[noreturn]] void fail(const Token& t, const std::string& what) { throw ParseError(file_, lineNo_, t.column, what); }
    [[noreturn]] void failEnd(const std::vector<Token>& toks, const std::string& what) {
        const Token& last = toks.back();
        throw ParseError(file_, lineNo_, last.column + static_cast<int>(last.text.size()), what);
    }
    [[noreturn]] void unterminated() {
        throw ParseError(file_, blockLine_, 1,
                         "stanza '" + blockTitle_ + "' opened here is not terminated by '!'");
    }
    [[noreturn]] void semantic(const std::string& what) {
        throw SemanticError(file_ + ":" + std::to_string(lineNo_) + ": " + what);
    }

    Span here() const { return Span{file_, lineNo_, lineNo_}; }

    void warn(const std::vector<Token>& toks) {
        std::string text;
        for (const auto& t : toks) text += (text.empty() ? "" : " ") + std::string(t.text);
        cfg_.warnings.push_back(Diagnostic{Severity::Warning, "ignoring unknown statement '" + text + "'", here()});
    }

    void expectCount(const std::vector<Token>& toks, std::size_t n, const char* usage) {
        if (toks.size() < n) failEnd(toks, std::string("incomplete statement, expected '") + usage + "'");
        if (toks.size() > n) fail(toks[n], std::string("unexpected token, expected '") + usage + "'");
    }

    Prefix prefix(const Token& t, bool strict = true) {
        auto p = Prefix::parse(t.text, strict);
        if (!p) {
            if (strict && Prefix::parse(t.text, false)) fail(t, "prefix '" + std::string(t.text) + "' has host bits set");
            fail(t, "malformed prefix '" + std::string(t.text) + "'");
        }
        return *p;
    }

    Prefix prefixOrAny(const Token& t) { return t.text == "any" ? Prefix::any() : prefix(t); }

    Action action(const Token& t) {
        if (t.text == "permit") return Action::Permit;
        if (t.text == "deny") return Action::Deny;
        fail(t, "expected 'permit' or 'deny'");
    }

    long number(const Token& t, long lo, long hi, const char* what) {
        long v = 0;
        auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc{} || p != t.text.data() + t.text.size())
            fail(t, std::string("expected ") + what + ", got '" + std::string(t.text) + "'");
        if (v < lo || v > hi)
            fail(t, std::string(what) + " " + std::to_string(v) + " out of range " + std::to_string(lo) + "-" +
                        std::to_string(hi));
        return v;
    }

    static bool topLevel(const std::vector<Token>& toks) {
        auto k = toks[0].text;
        if (k == "hostname" || k == "interface" || k == "router" || k == "access-list") return true;
        return k == "ip" && toks.size() > 1 && toks[1].text == "route";
    }

    void statement(const std::vector<Token>& toks) {
        if (toks.empty() || toks[0].text[0] == '#') return;
        if (toks[0].text == "!") {
            closeBlock();
            lastAcl_.clear();
            return;
        }
        if (block_ != Block::None) {
            if (topLevel(toks)) unterminated();
            switch (block_) {
                case Block::Interface: interfaceStatement(toks); break;
                case Block::Ospf: ospfStatement(toks); break;
                case Block::Bgp: bgpStatement(toks); break;
                case Block::None: break;
            }
            return;
        }
        auto k = toks[0].text;
        if (k != "access-list") lastAcl_.clear();
        if (k == "hostname") {
            expectCount(toks, 2, "hostname NAME");
            if (!cfg_.name.empty()) semantic("duplicate hostname");
            cfg_.name = std::string(toks[1].text);
            cfg_.hostnameSpan = here();
        } else if (k == "interface") {
            expectCount(toks, 2, "interface NAME");
            std::string name(toks[1].text);
            if (cfg_.interface(name)) semantic("duplicate interface '" + name + "'");
            Interface iface;
            iface.name = name;
            iface.span = here();
            cfg_.interfaces.push_back(iface);
            openBlock(Block::Interface, toks);
        } else if (k == "router") {
            if (toks.size() < 2) failEnd(toks, "expected 'ospf' or 'bgp'");
            if (toks[1].text == "ospf") {
                if (toks.size() > 3) fail(toks[3], "unexpected token");
                if (toks.size() == 3) number(toks[2], 1, 65535, "process id");
                if (cfg_.ospf) semantic("more than one OSPF process");
                cfg_.ospf.emplace();
                cfg_.ospf->span = here();
                openBlock(Block::Ospf, toks);
            } else if (toks[1].text == "bgp") {
                expectCount(toks, 3, "router bgp ASN");
                long asn = number(toks[2], 1, 4294967295L, "AS number");
                if (cfg_.bgp) semantic("more than one BGP process");
                cfg_.bgp.emplace();
                cfg_.bgp->asn = asn;
                cfg_.bgp->span = here();
                openBlock(Block::Bgp, toks);
            } else {
                warn(toks);
            }
        } else if (k == "ip" && toks.size() > 1 && toks[1].text == "route") {
            expectCount(toks, 5, "ip route A.B.C.D/L next-hop ROUTER");
            if (toks[3].text != "next-hop") fail(toks[3], "expected 'next-hop'");
            cfg_.staticRoutes.push_back(StaticRoute{prefix(toks[2]), std::string(toks[4].text), here()});
        } else if (k == "access-list") {
            accessList(toks);
        } else {
            warn(toks);
        }
    }

    void openBlock(Block b, const std::vector<Token>& toks) {
        block_ = b;
        blockLine_ = lineNo_;
        blockTitle_.clear();
        for (const auto& t : toks) blockTitle_ += (blockTitle_.empty() ? "" : " ") + std::string(t.text);
    }

    void closeBlock() {
        Span* span = nullptr;
        switch (block_) {
            case Block::None: return;
            case Block::Interface: span = &cfg_.interfaces.back().span; break;
            case Block::Ospf: span = &cfg_.ospf->span; break;
            case Block::Bgp: span = &cfg_.bgp->span; break;
        }
        span->lastLine = lineNo_;
        block_ = Block::None;
    }

    void interfaceStatement(const std::vector<Token>& toks) {
        Interface& iface = cfg_.interfaces.back();
        auto k = toks[0].text;
        if (k == "ip" && toks.size() > 1 && toks[1].text == "access-group") {
            expectCount(toks, 4, "ip access-group ACL in|out");
            std::string name(toks[2].text);
            if (toks[3].text == "in") {
                if (iface.inAcl) semantic("interface already has an inbound access-group");
                iface.inAcl = name;
                iface.inAclSpan = here();
            } else if (toks[3].text == "out") {
                if (iface.outAcl) semantic("interface already has an outbound access-group");
                iface.outAcl = name;
                iface.outAclSpan = here();
            } else {
                fail(toks[3], "expected 'in' or 'out'");
            }
        } else if (k == "ip") {
            expectCount(toks, 2, "ip A.B.C.D/L");
            auto slash = toks[1].text.find('/');
            auto host = parseAddress(toks[1].text.substr(0, slash == std::string_view::npos ? 0 : slash));
            Prefix p = prefix(toks[1], false);
            if (!host) fail(toks[1], "malformed address");
            if (iface.prefix) semantic("interface already has an address");
            iface.prefix = p;
            iface.hostAddress = *host;
            iface.ipSpan = here();
        } else if (k == "shutdown") {
            expectCount(toks, 1, "shutdown");
            iface.enabled = false;
            iface.shutdownSpan = here();
        } else if (k == "ospf" && toks.size() > 1 && toks[1].text == "cost") {
            expectCount(toks, 3, "ospf cost N");
            iface.ospfCost = static_cast<int>(number(toks[2], 1, 65535, "OSPF cost"));
            iface.costSpan = here();
        } else if (k == "ospf" && toks.size() > 1 && toks[1].text == "passive") {
            expectCount(toks, 2, "ospf passive");
            iface.ospfPassive = true;
            iface.passiveSpan = here();
        } else {
            warn(toks);
        }
    }

    void ospfStatement(const std::vector<Token>& toks) {
        if (toks[0].text == "network") {
            expectCount(toks, 2, "network A.B.C.D/L");
            cfg_.ospf->networks.push_back(NetworkStatement{prefix(toks[1]), here()});
        } else {
            warn(toks);
        }
    }

    void bgpStatement(const std::vector<Token>& toks) {
        auto& bgp = *cfg_.bgp;
        auto k = toks[0].text;
        if (k == "neighbor") {
            expectCount(toks, 4, "neighbor ROUTER interface IFACE");
            if (toks[2].text != "interface") fail(toks[2], "expected 'interface'");
            std::string peer(toks[1].text);
            if (bgp.neighbor(peer)) semantic("duplicate neighbor '" + peer + "'");
            bgp.neighbors.push_back(BgpNeighbor{peer, std::string(toks[3].text), here()});
        } else if (k == "network") {
            expectCount(toks, 2, "network A.B.C.D/L");
            bgp.networks.push_back(NetworkStatement{prefix(toks[1]), here()});
        } else if (k == "filter") {
            if (toks.size() < 5) failEnd(toks, "incomplete statement, expected 'filter out ROUTER (permit|deny) PREFIX ...'");
            if (toks[1].text != "out") fail(toks[1], "only outbound filters are supported");
            if ((toks.size() - 3) % 2 != 0) failEnd(toks, "expected a prefix after the last action");
            auto& rules = bgp.filters[std::string(toks[2].text)];
            for (std::size_t i = 3; i < toks.size(); i += 2)
                rules.push_back(FilterRule{action(toks[i]), prefix(toks[i + 1]), here()});
        } else {
            warn(toks);
        }
    }

    void accessList(const std::vector<Token>& toks) {
        expectCount(toks, 7, "access-list NAME (permit|deny) src (A.B.C.D/L|any) dst (A.B.C.D/L|any)");
        std::string name(toks[1].text);
        Action a = action(toks[2]);
        if (toks[3].text != "src") fail(toks[3], "expected 'src'");
        Prefix src = prefixOrAny(toks[4]);
        if (toks[5].text != "dst") fail(toks[5], "expected 'dst'");
        Prefix dst = prefixOrAny(toks[6]);
        AclDef* def = nullptr;
        for (auto& d : cfg_.acls)
            if (d.name == name) def = &d;
        if (def && lastAcl_ != name) semantic("duplicate definition of access-list '" + name + "'");
        if (!def) {
            cfg_.acls.push_back(AclDef{name, {}, here()});
            def = &cfg_.acls.back();
        }
        def->rules.push_back(AclRule{a, src, dst, here()});
        def->span.lastLine = lineNo_;
        lastAcl_ = name;
    }

    std::string_view text_;
    std::string file_;
    RouterConfig cfg_;
    int lineNo_ = 0;
    Block block_ = Block::None;
    int blockLine_ = 0;
    std::string blockTitle_;
    std::string lastAcl_;
};

}  // namespace

RouterConfig parseConfig(std::string_view text, const std::string& filename) { return Parser(text, filename).run(); }

std::string printConfig(const RouterConfig& cfg) {
    std::string out = "hostname " + cfg.name + "\n!\n";
    for (const auto& i : cfg.interfaces) {
        out += "interface " + i.name + "\n";
        if (i.prefix) out += " ip " + formatAddress(i.hostAddress) + "/" + std::to_string(i.prefix->length) + "\n";
        if (!i.enabled) out += " shutdown\n";
        if (i.ospfCost) out += " ospf cost " + std::to_string(*i.ospfCost) + "\n";
        if (i.ospfPassive) out += " ospf passive\n";
        if (i.inAcl) out += " ip access-group " + *i.inAcl + " in\n";
        if (i.outAcl) out += " ip access-group " + *i.outAcl + " out\n";
        out += "!\n";
    }
    if (cfg.ospf) {
        out += "router ospf\n";
        for (const auto& n : cfg.ospf->networks) out += " network " + n.prefix.str() + "\n";
        out += "!\n";
    }
    if (cfg.bgp) {
        out += "router bgp " + std::to_string(cfg.bgp->asn) + "\n";
        for (const auto& n : cfg.bgp->neighbors) out += " neighbor " + n.peer + " interface " + n.peerInterface + "\n";
        for (const auto& n : cfg.bgp->networks) out += " network " + n.prefix.str() + "\n";
        for (const auto& [peer, rules] : cfg.bgp->filters) {
            if (rules.empty()) continue;
            out += " filter out " + peer;
            for (const auto& r : rules) out += std::string(" ") + actionName(r.action) + " " + r.prefix.str();
            out += "\n";
        }
        out += "!\n";
    }
    for (const auto& s : cfg.staticRoutes) out += "ip route " + s.dst.str() + " next-hop " + s.nextHop + "\n";
    if (!cfg.staticRoutes.empty()) out += "!\n";
    for (const auto& a : cfg.acls) {
        for (const auto& r : a.rules) {
            auto p = [](const Prefix& x) { return x.isAny() ? std::string("any") : x.str(); };
            out += "access-list " + a.name + " " + actionName(r.action) + " src " + p(r.src) + " dst " + p(r.dst) + "\n";
        }
        out += "!\n";
    }
    return out;
}

}  // namespace cfgloc::net
