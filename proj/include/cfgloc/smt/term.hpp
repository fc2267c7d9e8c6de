#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace cfgloc::smt {

enum class Op : std::uint8_t {
    BoolConst,
    BoolVar,
    IntConst,
    IntVar,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Ite,
    Eq,
    Ult,
    Ule,
    Add,
    AddConst,
};

// Handle to a hash-consed node owned by a TermManager.
struct Term {
    std::uint32_t id = UINT32_MAX;

    bool valid() const { return id != UINT32_MAX; }
    bool operator==(const Term&) const = default;
    auto operator<=>(const Term&) const = default;
};

struct Node {
    explicit Node(Op o) : op(o) {}

    Op op;
    std::uint16_t width = 0;  // 0 for boolean terms
    // Non-zero on constants that were copied out of a configuration file; the
    // encoder uses it to audit that such constants only occur in bindings.
    std::uint32_t tag = 0;
    std::uint64_t value = 0;  // constants, AddConst addend
    std::vector<std::uint32_t> kids;
    std::string name;  // variables only
};

// Values for every variable of a system, keyed by variable term id.
class Model {
public:
    void set(Term var, std::uint64_t value) { values_[var.id] = value; }
    std::uint64_t get(Term var) const {
        auto it = values_.find(var.id);
        return it == values_.end() ? 0 : it->second;
    }
    bool boolean(Term var) const { return get(var) != 0; }
    bool contains(Term var) const { return values_.count(var.id) != 0; }
    std::size_t size() const { return values_.size(); }

private:
    std::unordered_map<std::uint32_t, std::uint64_t> values_;
};

class TermManager {
public:
    TermManager();

    Term boolConst(bool value, std::uint32_t tag = 0);
    Term boolVar(std::string name);
    Term intConst(std::uint64_t value, unsigned width, std::uint32_t tag = 0);
    Term intVar(std::string name, unsigned width);

    Term mkNot(Term a);
    Term mkAnd(std::span<const Term> args);
    Term mkAnd(std::initializer_list<Term> args) { return mkAnd(std::span<const Term>(args.begin(), args.size())); }
    Term mkOr(std::span<const Term> args);
    Term mkOr(std::initializer_list<Term> args) { return mkOr(std::span<const Term>(args.begin(), args.size())); }
    Term mkImplies(Term a, Term b);
    Term mkIff(Term a, Term b);
    Term mkIte(Term cond, Term then, Term otherwise);
    Term mkEq(Term a, Term b);
    Term mkUlt(Term a, Term b);
    Term mkUle(Term a, Term b);
    // Modular addition; callers size widths so that no sum wraps.
    Term mkAdd(Term a, Term b);
    Term mkAddConst(Term a, std::uint64_t addend);

    // a <= x <= b for constant bounds
    Term mkInRange(Term x, Term lo, Term hi) { return mkAnd({mkUle(lo, x), mkUle(x, hi)}); }

    const Node& node(Term t) const { return nodes_[t.id]; }
    bool isBool(Term t) const { return nodes_[t.id].width == 0; }
    unsigned width(Term t) const { return nodes_[t.id].width; }
    bool isConst(Term t) const {
        auto op = nodes_[t.id].op;
        return op == Op::BoolConst || op == Op::IntConst;
    }
    bool isTrue(Term t) const { return nodes_[t.id].op == Op::BoolConst && nodes_[t.id].value != 0; }
    bool isFalse(Term t) const { return nodes_[t.id].op == Op::BoolConst && nodes_[t.id].value == 0; }
    std::size_t size() const { return nodes_.size(); }

    const std::vector<Term>& variables() const { return vars_; }

    std::uint64_t evaluate(Term t, const Model& m) const;
    bool evaluateBool(Term t, const Model& m) const { return evaluate(t, m) != 0; }

    std::string toString(Term t) const;
    // Variables reachable from t, in id order.
    std::vector<Term> collectVariables(Term t) const;
    // Visits every node reachable from t once.
    template <class F>
    void visit(Term t, F&& f) const {
        std::vector<std::uint32_t> stack{t.id};
        std::vector<char> seen(nodes_.size(), 0);
        while (!stack.empty()) {
            auto id = stack.back();
            stack.pop_back();
            if (seen[id]) continue;
            seen[id] = 1;
            f(Term{id}, nodes_[id]);
            for (auto k : nodes_[id].kids) stack.push_back(k);
        }
    }

    static std::uint64_t mask(unsigned width) { return width >= 64 ? ~0ull : ((1ull << width) - 1); }

private:
    Term intern(Node n);
    bool untaggedConst(Term t) const { return isConst(t) && nodes_[t.id].tag == 0; }
    void toString(Term t, std::string& out) const;

    struct KeyHash {
        std::size_t operator()(const Node& n) const;
    };
    struct KeyEq {
        bool operator()(const Node& a, const Node& b) const;
    };

    std::vector<Node> nodes_;
    std::unordered_map<Node, std::uint32_t, KeyHash, KeyEq> table_;
    std::vector<Term> vars_;
};

}  // namespace cfgloc::smt
