#include "cfgloc/smt/term.hpp"

#include <algorithm>
#include <sstream>

#include "cfgloc/error.hpp"

namespace cfgloc::smt {

namespace {

std::size_t mix(std::size_t h, std::uint64_t v) {
    h ^= std::hash<std::uint64_t>{}(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

const char* opName(Op op) {
    switch (op) {
        case Op::Not: return "not";
        case Op::And: return "and";
        case Op::Or: return "or";
        case Op::Implies: return "=>";
        case Op::Iff: return "iff";
        case Op::Ite: return "ite";
        case Op::Eq: return "=";
        case Op::Ult: return "bvult";
        case Op::Ule: return "bvule";
        case Op::Add: return "bvadd";
        case Op::AddConst: return "bvadd";
        default: return "?";
    }
}

}  // namespace

std::size_t TermManager::KeyHash::operator()(const Node& n) const {
    std::size_t h = static_cast<std::size_t>(n.op);
    h = mix(h, n.width);
    h = mix(h, n.tag);
    h = mix(h, n.value);
    for (auto k : n.kids) h = mix(h, k);
    if (!n.name.empty()) h = mix(h, std::hash<std::string>{}(n.name));
    return h;
}

bool TermManager::KeyEq::operator()(const Node& a, const Node& b) const {
    return a.op == b.op && a.width == b.width && a.tag == b.tag && a.value == b.value && a.kids == b.kids &&
           a.name == b.name;
}

TermManager::TermManager() {
    boolConst(false);
    boolConst(true);
}

Term TermManager::intern(Node n) {
    auto it = table_.find(n);
    if (it != table_.end()) return Term{it->second};
    auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(n);
    table_.emplace(std::move(n), id);
    return Term{id};
}

Term TermManager::boolConst(bool value, std::uint32_t tag) {
    Node n(Op::BoolConst);
    n.value = value ? 1 : 0;
    n.tag = tag;
    return intern(std::move(n));
}

Term TermManager::boolVar(std::string name) {
    Node n(Op::BoolVar);
    n.name = std::move(name);
    // variables are never shared, even when names collide
    n.value = nodes_.size();
    Term t = intern(std::move(n));
    vars_.push_back(t);
    return t;
}

Term TermManager::intConst(std::uint64_t value, unsigned width, std::uint32_t tag) {
    if (width == 0 || width > 64) throw InternalError("integer width out of range");
    if ((value & ~mask(width)) != 0) throw InternalError("constant does not fit its width");
    Node n(Op::IntConst);
    n.width = static_cast<std::uint16_t>(width);
    n.value = value;
    n.tag = tag;
    return intern(std::move(n));
}

Term TermManager::intVar(std::string name, unsigned width) {
    if (width == 0 || width > 64) throw InternalError("integer width out of range");
    Node n(Op::IntVar);
    n.width = static_cast<std::uint16_t>(width);
    n.name = std::move(name);
    n.value = nodes_.size();
    Term t = intern(std::move(n));
    vars_.push_back(t);
    return t;
}

Term TermManager::mkNot(Term a) {
    if (!isBool(a)) throw InternalError("not: boolean operand expected");
    const Node& na = nodes_[a.id];
    if (untaggedConst(a)) return boolConst(na.value == 0);
    if (na.op == Op::Not) return Term{na.kids[0]};
    Node n(Op::Not);
    n.kids = {a.id};
    return intern(std::move(n));
}

Term TermManager::mkAnd(std::span<const Term> args) {
    std::vector<std::uint32_t> kids;
    kids.reserve(args.size());
    for (Term a : args) {
        if (!isBool(a)) throw InternalError("and: boolean operand expected");
        if (untaggedConst(a)) {
            if (nodes_[a.id].value == 0) return boolConst(false);
            continue;
        }
        kids.push_back(a.id);
    }
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    if (kids.empty()) return boolConst(true);
    if (kids.size() == 1) return Term{kids[0]};
    Node n(Op::And);
    n.kids = std::move(kids);
    return intern(std::move(n));
}

Term TermManager::mkOr(std::span<const Term> args) {
    std::vector<std::uint32_t> kids;
    kids.reserve(args.size());
    for (Term a : args) {
        if (!isBool(a)) throw InternalError("or: boolean operand expected");
        if (untaggedConst(a)) {
            if (nodes_[a.id].value != 0) return boolConst(true);
            continue;
        }
        kids.push_back(a.id);
    }
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    if (kids.empty()) return boolConst(false);
    if (kids.size() == 1) return Term{kids[0]};
    Node n(Op::Or);
    n.kids = std::move(kids);
    return intern(std::move(n));
}

Term TermManager::mkImplies(Term a, Term b) {
    if (!isBool(a) || !isBool(b)) throw InternalError("implies: boolean operands expected");
    if (untaggedConst(a)) return nodes_[a.id].value ? b : boolConst(true);
    if (untaggedConst(b) && nodes_[b.id].value) return boolConst(true);
    if (a == b) return boolConst(true);
    Node n(Op::Implies);
    n.kids = {a.id, b.id};
    return intern(std::move(n));
}

Term TermManager::mkIff(Term a, Term b) {
    if (!isBool(a) || !isBool(b)) throw InternalError("iff: boolean operands expected");
    if (a == b) return boolConst(true);
    if (untaggedConst(a)) return nodes_[a.id].value ? b : mkNot(b);
    if (untaggedConst(b)) return nodes_[b.id].value ? a : mkNot(a);
    if (a.id > b.id) std::swap(a, b);
    Node n(Op::Iff);
    n.kids = {a.id, b.id};
    return intern(std::move(n));
}

Term TermManager::mkIte(Term c, Term t, Term e) {
    if (!isBool(c)) throw InternalError("ite: boolean condition expected");
    if (width(t) != width(e)) throw InternalError("ite: branch widths differ");
    if (untaggedConst(c)) return nodes_[c.id].value ? t : e;
    if (t == e) return t;
    Node n(Op::Ite);
    n.width = nodes_[t.id].width;
    n.kids = {c.id, t.id, e.id};
    return intern(std::move(n));
}

Term TermManager::mkEq(Term a, Term b) {
    if (isBool(a) || isBool(b)) return mkIff(a, b);
    if (width(a) != width(b)) throw InternalError("eq: widths differ");
    if (a == b) return boolConst(true);
    if (untaggedConst(a) && untaggedConst(b)) return boolConst(nodes_[a.id].value == nodes_[b.id].value);
    if (a.id > b.id) std::swap(a, b);
    Node n(Op::Eq);
    n.kids = {a.id, b.id};
    return intern(std::move(n));
}

Term TermManager::mkUlt(Term a, Term b) {
    if (isBool(a) || width(a) != width(b)) throw InternalError("ult: integer operands of equal width expected");
    if (a == b) return boolConst(false);
    if (untaggedConst(a) && untaggedConst(b)) return boolConst(nodes_[a.id].value < nodes_[b.id].value);
    if (untaggedConst(b) && nodes_[b.id].value == 0) return boolConst(false);
    Node n(Op::Ult);
    n.kids = {a.id, b.id};
    return intern(std::move(n));
}

Term TermManager::mkUle(Term a, Term b) {
    if (isBool(a) || width(a) != width(b)) throw InternalError("ule: integer operands of equal width expected");
    if (a == b) return boolConst(true);
    if (untaggedConst(a) && untaggedConst(b)) return boolConst(nodes_[a.id].value <= nodes_[b.id].value);
    if (untaggedConst(a) && nodes_[a.id].value == 0) return boolConst(true);
    if (untaggedConst(b) && nodes_[b.id].value == mask(width(b))) return boolConst(true);
    Node n(Op::Ule);
    n.kids = {a.id, b.id};
    return intern(std::move(n));
}

Term TermManager::mkAdd(Term a, Term b) {
    if (isBool(a) || width(a) != width(b)) throw InternalError("add: integer operands of equal width expected");
    unsigned w = width(a);
    if (untaggedConst(a) && untaggedConst(b))
        return intConst((nodes_[a.id].value + nodes_[b.id].value) & mask(w), w);
    if (untaggedConst(b)) return mkAddConst(a, nodes_[b.id].value);
    if (untaggedConst(a)) return mkAddConst(b, nodes_[a.id].value);
    if (a.id > b.id) std::swap(a, b);
    Node n(Op::Add);
    n.width = static_cast<std::uint16_t>(w);
    n.kids = {a.id, b.id};
    return intern(std::move(n));
}

Term TermManager::mkAddConst(Term a, std::uint64_t addend) {
    if (isBool(a)) throw InternalError("add: integer operand expected");
    unsigned w = width(a);
    addend &= mask(w);
    if (addend == 0) return a;
    if (untaggedConst(a)) return intConst((nodes_[a.id].value + addend) & mask(w), w);
    Node n(Op::AddConst);
    n.width = static_cast<std::uint16_t>(w);
    n.value = addend;
    n.kids = {a.id};
    return intern(std::move(n));
}

std::uint64_t TermManager::evaluate(Term root, const Model& m) const {
    // iterative post-order so deep ITE chains do not exhaust the stack
    std::unordered_map<std::uint32_t, std::uint64_t> memo;
    std::vector<std::pair<std::uint32_t, bool>> stack{{root.id, false}};
    while (!stack.empty()) {
        auto [id, expanded] = stack.back();
        stack.pop_back();
        if (memo.count(id)) continue;
        const Node& n = nodes_[id];
        if (!expanded) {
            stack.push_back({id, true});
            for (auto k : n.kids)
                if (!memo.count(k)) stack.push_back({k, false});
            continue;
        }
        auto kid = [&](std::size_t i) { return memo.at(n.kids[i]); };
        std::uint64_t v = 0;
        switch (n.op) {
            case Op::BoolConst:
            case Op::IntConst: v = n.value; break;
            case Op::BoolVar: v = m.get(Term{id}) ? 1 : 0; break;
            case Op::IntVar: v = m.get(Term{id}) & mask(n.width); break;
            case Op::Not: v = kid(0) ? 0 : 1; break;
            case Op::And:
                v = 1;
                for (std::size_t i = 0; i < n.kids.size(); ++i) v &= kid(i) ? 1 : 0;
                break;
            case Op::Or:
                v = 0;
                for (std::size_t i = 0; i < n.kids.size(); ++i) v |= kid(i) ? 1 : 0;
                break;
            case Op::Implies: v = (!kid(0) || kid(1)) ? 1 : 0; break;
            case Op::Iff: v = ((kid(0) != 0) == (kid(1) != 0)) ? 1 : 0; break;
            case Op::Ite: v = kid(0) ? kid(1) : kid(2); break;
            case Op::Eq: v = kid(0) == kid(1) ? 1 : 0; break;
            case Op::Ult: v = kid(0) < kid(1) ? 1 : 0; break;
            case Op::Ule: v = kid(0) <= kid(1) ? 1 : 0; break;
            case Op::Add: v = (kid(0) + kid(1)) & mask(n.width); break;
            case Op::AddConst: v = (kid(0) + n.value) & mask(n.width); break;
        }
        memo[id] = v;
    }
    return memo.at(root.id);
}

void TermManager::toString(Term t, std::string& out) const {
    const Node& n = nodes_[t.id];
    switch (n.op) {
        case Op::BoolConst: out += n.value ? "true" : "false"; return;
        case Op::IntConst: out += std::to_string(n.value); return;
        case Op::BoolVar:
        case Op::IntVar: out += n.name; return;
        default: break;
    }
    out += '(';
    out += opName(n.op);
    for (auto k : n.kids) {
        out += ' ';
        toString(Term{k}, out);
    }
    if (n.op == Op::AddConst) out += ' ' + std::to_string(n.value);
    out += ')';
}

std::string TermManager::toString(Term t) const {
    std::string out;
    toString(t, out);
    return out;
}

std::vector<Term> TermManager::collectVariables(Term t) const {
    std::vector<Term> out;
    visit(t, [&](Term x, const Node& n) {
        if (n.op == Op::BoolVar || n.op == Op::IntVar) out.push_back(x);
    });
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace cfgloc::smt
