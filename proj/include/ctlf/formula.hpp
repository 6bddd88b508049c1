// ============================================================================
// ctlf/formula.hpp: CTL formulas over arbitrary Boolean bases
// ============================================================================
//
// Formulas are hash-consed: every structurally distinct node exists exactly
// once, so a Formula is a plain pointer and equality is pointer equality.
// Nodes are never freed; the intern table lives for the whole process.
//
// Node kinds:
//   Prop   p, q, x_1 ...
//   Apply  f(φ1, ..., φn) for a truth table f of arity n (constants: n = 0)
//   Quant  Q O φ or Q[φ O ψ] with Q ∈ {A,E}, O ∈ {X,F,G,U,R}
//
// Quantified nodes carry a hidden occurrence tag (0 by default).  Tags are
// invisible to rendering and only used to make repeated temporal
// subformulas distinct when an engine asks for unique occurrences.
//
// ============================================================================

#ifndef CTLF_FORMULA_HPP
#define CTLF_FORMULA_HPP

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstring>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace ctlf {

// ── Errors ──────────────────────────────────────────────────────────────────

struct Error : std::runtime_error {
    std::string kind;
    Error(std::string k, const std::string& msg)
        : std::runtime_error(msg), kind(std::move(k)) {}
};

struct ParseError : Error {
    std::size_t pos;
    ParseError(std::string k, const std::string& msg, std::size_t p)
        : Error(std::move(k), msg + " at position " + std::to_string(p)), pos(p) {}
};

// ── Truth tables and bases ──────────────────────────────────────────────────

/// A Boolean function: outputs indexed by the input tuple read as a
/// big-endian binary number (first argument most significant).
struct TruthTable {
    std::string name;
    int arity = 0;
    std::vector<std::uint8_t> out;

    TruthTable() = default;
    TruthTable(std::string n, int a, std::vector<std::uint8_t> o)
        : name(std::move(n)), arity(a), out(std::move(o)) {
        if (arity < 0 || arity > 16 || out.size() != (std::size_t(1) << arity))
            throw Error("table", "truth table '" + name + "' has wrong output length");
    }

    /// Build from a bit string such as "0010".
    static TruthTable from_bits(const std::string& name, int arity, const std::string& bits) {
        std::vector<std::uint8_t> o;
        for (char c : bits) {
            if (c != '0' && c != '1')
                throw Error("table", "bad bit '" + std::string(1, c) + "' in table " + name);
            o.push_back(c == '1');
        }
        return TruthTable(name, arity, std::move(o));
    }

    /// Build from a predicate over the argument vector.
    static TruthTable from_fn(const std::string& name, int arity,
                              const std::function<bool(const std::vector<bool>&)>& fn) {
        std::vector<std::uint8_t> o(std::size_t(1) << arity);
        std::vector<bool> b(arity);
        for (std::size_t idx = 0; idx < o.size(); ++idx) {
            for (int i = 0; i < arity; ++i) b[i] = (idx >> (arity - 1 - i)) & 1;
            o[idx] = fn(b);
        }
        return TruthTable(name, arity, std::move(o));
    }

    bool at(std::size_t idx) const { return out[idx] != 0; }

    bool eval(const std::vector<bool>& b) const {
        std::size_t idx = 0;
        for (int i = 0; i < arity; ++i) idx = (idx << 1) | (b[i] ? 1u : 0u);
        return out[idx] != 0;
    }

    std::string bits() const {
        std::string s;
        for (auto v : out) s.push_back(v ? '1' : '0');
        return s;
    }

    bool same_function(const TruthTable& o) const { return arity == o.arity && out == o.out; }
    bool operator==(const TruthTable& o) const { return name == o.name && same_function(o); }
    bool operator<(const TruthTable& o) const {
        if (name != o.name) return name < o.name;
        if (arity != o.arity) return arity < o.arity;
        return out < o.out;
    }
};

namespace tables {
inline const TruthTable& and2() { static const TruthTable t = TruthTable::from_bits("and", 2, "0001"); return t; }
inline const TruthTable& or2()  { static const TruthTable t = TruthTable::from_bits("or", 2, "0111"); return t; }
inline const TruthTable& not1() { static const TruthTable t = TruthTable::from_bits("not", 1, "10"); return t; }
inline const TruthTable& imp2() { static const TruthTable t = TruthTable::from_bits("imp", 2, "1101"); return t; }
inline const TruthTable& iff2() { static const TruthTable t = TruthTable::from_bits("iff", 2, "1001"); return t; }
inline const TruthTable& xor2() { static const TruthTable t = TruthTable::from_bits("xor", 2, "0110"); return t; }
inline const TruthTable& nimpl2() { static const TruthTable t = TruthTable::from_bits("nimpl", 2, "0010"); return t; }
inline const TruthTable& top0() { static const TruthTable t = TruthTable::from_bits("top", 0, "1"); return t; }
inline const TruthTable& bot0() { static const TruthTable t = TruthTable::from_bits("bot", 0, "0"); return t; }
} // namespace tables

/// A named finite set of truth tables.
class Base {
public:
    Base() = default;
    Base(std::initializer_list<TruthTable> ts) { for (auto& t : ts) add(t); }

    void add(const TruthTable& t) {
        auto it = fns_.find(t.name);
        if (it != fns_.end() && !(it->second == t))
            throw Error("base", "duplicate function name '" + t.name + "'");
        fns_[t.name] = t;
    }
    const TruthTable* find(const std::string& name) const {
        auto it = fns_.find(name);
        return it == fns_.end() ? nullptr : &it->second;
    }
    bool contains(const TruthTable& t) const {
        auto p = find(t.name);
        return p && p->same_function(t);
    }
    bool contains_function(const TruthTable& t) const {
        for (auto& [_, f] : fns_) if (f.same_function(t)) return true;
        return false;
    }
    std::vector<TruthTable> functions() const {
        std::vector<TruthTable> v;
        for (auto& [_, f] : fns_) v.push_back(f);
        return v;
    }
    std::size_t size() const { return fns_.size(); }
    Base united(const Base& o) const {
        Base b = *this;
        for (auto& [_, f] : o.fns_) b.add(f);
        return b;
    }

private:
    std::map<std::string, TruthTable> fns_;
};

inline Base standard_base() { return Base{tables::and2(), tables::or2(), tables::not1()}; }

/// Parse a base file: one `name arity bits` per line, `#` starts a comment.
inline Base parse_base(const std::string& text) {
    Base b;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string name, bits;
        int arity;
        if (!(ls >> name)) continue;
        if (!(ls >> arity >> bits))
            throw Error("base", "malformed base line " + std::to_string(lineno));
        b.add(TruthTable::from_bits(name, arity, bits));
    }
    return b;
}

// ── Formula nodes ───────────────────────────────────────────────────────────

enum class Kind : std::uint8_t { Prop, Apply, Quant };
enum class PathQ : std::uint8_t { A, E };
enum class TOp : std::uint8_t { X, F, G, U, R };

inline PathQ dual(PathQ q) { return q == PathQ::A ? PathQ::E : PathQ::A; }
inline TOp dual(TOp o) {
    switch (o) {
        case TOp::X: return TOp::X;
        case TOp::F: return TOp::G;
        case TOp::G: return TOp::F;
        case TOp::U: return TOp::R;
        case TOp::R: return TOp::U;
    }
    return o;
}
inline bool is_binary(TOp o) { return o == TOp::U || o == TOp::R; }
inline char q_char(PathQ q) { return q == PathQ::A ? 'A' : 'E'; }
inline char op_char(TOp o) { return "XFGUR"[int(o)]; }

struct Node {
    Kind kind;
    std::string name;            // proposition or function name
    TruthTable table;            // Apply only
    PathQ q = PathQ::A;          // Quant only
    TOp op = TOp::X;             // Quant only
    int tag = 0;                 // Quant only, hidden occurrence tag
    std::vector<const Node*> args;
    std::size_t hash = 0;
    int size = 1;                // AST node count
    int depth = 0;               // temporal depth
    std::uint64_t serial = 0;    // creation order, used only as a cache key

    bool is_prop() const { return kind == Kind::Prop; }
    bool is_apply() const { return kind == Kind::Apply; }
    bool is_quant() const { return kind == Kind::Quant; }
    bool is_not() const {
        return kind == Kind::Apply && table.arity == 1 && table.name == "not" &&
               table.out[0] == 1 && table.out[1] == 0;
    }
    bool is_and() const { return kind == Kind::Apply && table == tables::and2(); }
    bool is_or() const { return kind == Kind::Apply && table == tables::or2(); }
};

using Formula = const Node*;

namespace detail {

struct NodeKeyHash {
    std::size_t operator()(const Node* n) const { return n->hash; }
};
struct NodeKeyEq {
    bool operator()(const Node* a, const Node* b) const {
        return a->kind == b->kind && a->name == b->name && a->q == b->q && a->op == b->op &&
               a->tag == b->tag && a->args == b->args && a->table.out == b->table.out &&
               a->table.arity == b->table.arity;
    }
};

inline std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

class InternTable {
public:
    static InternTable& get() {
        static InternTable t;
        return t;
    }
    const Node* intern(Node&& n) {
        std::size_t h = std::hash<int>()(int(n.kind));
        h = mix(h, std::hash<std::string>()(n.name));
        h = mix(h, std::size_t(n.q) * 7 + std::size_t(n.op));
        h = mix(h, std::size_t(n.tag));
        for (auto v : n.table.out) h = mix(h, v);
        for (auto a : n.args) h = mix(h, a->hash);
        n.hash = h;
        std::lock_guard<std::mutex> lock(mu_);
        auto it = set_.find(&n);
        if (it != set_.end()) return *it;
        auto* p = new Node(std::move(n));
        p->serial = next_serial_++;
        set_.insert(p);
        return p;
    }

private:
    std::mutex mu_;
    std::unordered_set<const Node*, NodeKeyHash, NodeKeyEq> set_;
    std::uint64_t next_serial_ = 1;
};

} // namespace detail

// ── Constructors ────────────────────────────────────────────────────────────

inline bool valid_identifier(const std::string& s) {
    if (s.empty() || !(s[0] >= 'a' && s[0] <= 'z')) return false;
    for (char c : s)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')) return false;
    return true;
}

inline Formula prop(const std::string& name) {
    if (!valid_identifier(name)) throw Error("identifier", "invalid proposition name '" + name + "'");
    Node n{};
    n.kind = Kind::Prop;
    n.name = name;
    return detail::InternTable::get().intern(std::move(n));
}

inline Formula apply(const TruthTable& t, std::vector<Formula> args) {
    if (int(args.size()) != t.arity)
        throw Error("arity", "function '" + t.name + "' expects " + std::to_string(t.arity) +
                                 " arguments, got " + std::to_string(args.size()));
    Node n{};
    n.kind = Kind::Apply;
    n.name = t.name;
    n.table = t;
    n.args = std::move(args);
    for (auto a : n.args) {
        n.size += a->size;
        n.depth = std::max(n.depth, a->depth);
    }
    return detail::InternTable::get().intern(std::move(n));
}

inline Formula quant(PathQ q, TOp op, Formula a, Formula b = nullptr, int tag = 0) {
    if (is_binary(op) != (b != nullptr))
        throw Error("arity", std::string("temporal operator ") + op_char(op) + " has wrong argument count");
    Node n{};
    n.kind = Kind::Quant;
    n.q = q;
    n.op = op;
    n.tag = tag;
    n.args.push_back(a);
    if (b) n.args.push_back(b);
    for (auto x : n.args) {
        n.size += x->size;
        n.depth = std::max(n.depth, x->depth);
    }
    n.depth += 1;
    return detail::InternTable::get().intern(std::move(n));
}

inline Formula with_tag(Formula f, int tag) {
    if (!f->is_quant()) return f;
    return quant(f->q, f->op, f->args[0], f->args.size() > 1 ? f->args[1] : nullptr, tag);
}

inline Formula lnot(Formula a) { return apply(tables::not1(), {a}); }
inline Formula land(Formula a, Formula b) { return apply(tables::and2(), {a, b}); }
inline Formula lor(Formula a, Formula b) { return apply(tables::or2(), {a, b}); }
inline Formula limp(Formula a, Formula b) { return lor(lnot(a), b); }
inline Formula liff(Formula a, Formula b) { return land(limp(a, b), limp(b, a)); }
inline Formula top() { return apply(tables::top0(), {}); }
inline Formula bot() { return apply(tables::bot0(), {}); }

/// Left-nested conjunction; the empty conjunction is `top`.
inline Formula conj(const std::vector<Formula>& fs) {
    if (fs.empty()) return top();
    Formula r = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) r = land(r, fs[i]);
    return r;
}
/// Left-nested disjunction; the empty disjunction is `bot`.
inline Formula disj(const std::vector<Formula>& fs) {
    if (fs.empty()) return bot();
    Formula r = fs[0];
    for (std::size_t i = 1; i < fs.size(); ++i) r = lor(r, fs[i]);
    return r;
}

inline Formula AX(Formula a) { return quant(PathQ::A, TOp::X, a); }
inline Formula EX(Formula a) { return quant(PathQ::E, TOp::X, a); }
inline Formula AF(Formula a) { return quant(PathQ::A, TOp::F, a); }
inline Formula EF(Formula a) { return quant(PathQ::E, TOp::F, a); }
inline Formula AG(Formula a) { return quant(PathQ::A, TOp::G, a); }
inline Formula EG(Formula a) { return quant(PathQ::E, TOp::G, a); }
inline Formula AU(Formula a, Formula b) { return quant(PathQ::A, TOp::U, a, b); }
inline Formula EU(Formula a, Formula b) { return quant(PathQ::E, TOp::U, a, b); }
inline Formula AR(Formula a, Formula b) { return quant(PathQ::A, TOp::R, a, b); }
inline Formula ER(Formula a, Formula b) { return quant(PathQ::E, TOp::R, a, b); }

// ── Deterministic ordering ──────────────────────────────────────────────────

/// Structural total order independent of allocation addresses.
inline int compare(Formula a, Formula b) {
    if (a == b) return 0;
    if (a->size != b->size) return a->size < b->size ? -1 : 1;
    if (a->kind != b->kind) return a->kind < b->kind ? -1 : 1;
    if (a->name != b->name) return a->name < b->name ? -1 : 1;
    if (a->table.out != b->table.out) return a->table.out < b->table.out ? -1 : 1;
    if (a->q != b->q) return a->q < b->q ? -1 : 1;
    if (a->op != b->op) return a->op < b->op ? -1 : 1;
    if (a->tag != b->tag) return a->tag < b->tag ? -1 : 1;
    if (a->args.size() != b->args.size()) return a->args.size() < b->args.size() ? -1 : 1;
    for (std::size_t i = 0; i < a->args.size(); ++i)
        if (int c = compare(a->args[i], b->args[i])) return c;
    return 0;
}

struct FormulaLess {
    bool operator()(Formula a, Formula b) const { return compare(a, b) < 0; }
};

using FormulaSet = std::set<Formula, FormulaLess>;

// ── Rendering ───────────────────────────────────────────────────────────────

inline void render_to(Formula f, std::string& out) {
    switch (f->kind) {
        case Kind::Prop:
            out += f->name;
            return;
        case Kind::Apply:
            if (f->is_not()) {
                out += '!';
                render_to(f->args[0], out);
            } else if (f->is_and() || f->is_or()) {
                out += '(';
                render_to(f->args[0], out);
                out += f->is_and() ? " & " : " | ";
                render_to(f->args[1], out);
                out += ')';
            } else {
                out += f->name;
                if (f->table.arity > 0) {
                    out += '(';
                    for (std::size_t i = 0; i < f->args.size(); ++i) {
                        if (i) out += ", ";
                        render_to(f->args[i], out);
                    }
                    out += ')';
                }
            }
            return;
        case Kind::Quant:
            out += q_char(f->q);
            if (is_binary(f->op)) {
                out += '[';
                render_to(f->args[0], out);
                out += ' ';
                out += op_char(f->op);
                out += ' ';
                render_to(f->args[1], out);
                out += ']';
            } else {
                out += op_char(f->op);
                out += ' ';
                render_to(f->args[0], out);
            }
            return;
    }
}

inline std::string render(Formula f) {
    std::string s;
    render_to(f, s);
    return s;
}

// ── Parsing ─────────────────────────────────────────────────────────────────

namespace detail {

class Parser {
public:
    Parser(const std::string& text, const Base& base) : s_(text), base_(base) {}

    Formula parse() {
        Formula f = parse_imp();
        skip_ws();
        if (i_ != s_.size()) throw ParseError("syntax", "unexpected trailing input", i_);
        return f;
    }

private:
    const std::string& s_;
    const Base& base_;
    std::size_t i_ = 0;

    void skip_ws() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }
    bool peek(const char* tok) {
        skip_ws();
        return s_.compare(i_, std::strlen(tok), tok) == 0;
    }
    bool accept(const char* tok) {
        if (peek(tok)) {
            i_ += std::strlen(tok);
            return true;
        }
        return false;
    }
    void expect(const char* tok) {
        if (!accept(tok)) throw ParseError("syntax", std::string("expected '") + tok + "'", i_);
    }

    Formula mk_imp(Formula a, Formula b) {
        if (auto t = base_.find("imp"); t && t->same_function(tables::imp2())) return apply(*t, {a, b});
        return limp(a, b);
    }
    Formula mk_iff(Formula a, Formula b) {
        if (auto t = base_.find("iff"); t && t->same_function(tables::iff2())) return apply(*t, {a, b});
        return land(mk_imp(a, b), mk_imp(b, a));
    }

    Formula parse_imp() {
        Formula a = parse_or();
        if (accept("->")) return mk_imp(a, parse_imp());
        if (accept("<->")) return mk_iff(a, parse_imp());
        return a;
    }
    Formula parse_or() {
        Formula a = parse_and();
        while (true) {
            skip_ws();
            if (peek("|")) {
                ++i_;
                a = lor(a, parse_and());
            } else {
                return a;
            }
        }
    }
    Formula parse_and() {
        Formula a = parse_unary();
        while (accept("&")) a = land(a, parse_unary());
        return a;
    }
    Formula parse_unary() {
        skip_ws();
        if (i_ >= s_.size()) throw ParseError("syntax", "unexpected end of input", i_);
        char c = s_[i_];
        if (c == '!') {
            ++i_;
            return lnot(parse_unary());
        }
        if (c == '(') {
            ++i_;
            Formula f = parse_imp();
            expect(")");
            return f;
        }
        if (c == 'A' || c == 'E') {
            PathQ q = c == 'A' ? PathQ::A : PathQ::E;
            std::size_t start = i_;
            ++i_;
            if (i_ < s_.size() && s_[i_] == '[') {
                ++i_;
                Formula a = parse_imp();
                skip_ws();
                TOp op;
                if (accept("U")) op = TOp::U;
                else if (accept("R")) op = TOp::R;
                else throw ParseError("syntax", "expected U or R", i_);
                Formula b = parse_imp();
                expect("]");
                return quant(q, op, a, b);
            }
            if (i_ < s_.size()) {
                char o = s_[i_];
                TOp op;
                if (o == 'X') op = TOp::X;
                else if (o == 'F') op = TOp::F;
                else if (o == 'G') op = TOp::G;
                else throw ParseError("syntax", "expected temporal operator", i_);
                ++i_;
                if (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                    throw ParseError("syntax", "operator must be separated from its argument", i_);
                return quant(q, op, parse_unary());
            }
            throw ParseError("syntax", "dangling path quantifier", start);
        }
        if (c >= 'a' && c <= 'z') return parse_atom();
        throw ParseError("syntax", std::string("unexpected character '") + c + "'", i_);
    }
    Formula parse_atom() {
        std::size_t start = i_;
        while (i_ < s_.size() && (std::islower(static_cast<unsigned char>(s_[i_])) ||
                                  std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
            ++i_;
        std::string id = s_.substr(start, i_ - start);
        skip_ws();
        if (i_ < s_.size() && s_[i_] == '(') {
            const TruthTable* t = base_.find(id);
            if (!t) t = standard_lookup(id);
            if (!t) throw ParseError("unknown-function", "unknown function '" + id + "'", start);
            ++i_;
            std::vector<Formula> args;
            skip_ws();
            if (!accept(")")) {
                do {
                    args.push_back(parse_imp());
                } while (accept(","));
                expect(")");
            }
            if (int(args.size()) != t->arity)
                throw ParseError("arity", "function '" + id + "' expects " + std::to_string(t->arity) +
                                              " arguments", start);
            return apply(*t, std::move(args));
        }
        if (const TruthTable* t = base_.find(id); t && t->arity == 0) return apply(*t, {});
        return prop(id);
    }
    static const TruthTable* standard_lookup(const std::string& id) {
        if (id == "and") return &tables::and2();
        if (id == "or") return &tables::or2();
        if (id == "not") return &tables::not1();
        return nullptr;
    }
};

} // namespace detail

inline Formula parse_formula(const std::string& text, const Base& base = standard_base()) {
    return detail::Parser(text, base).parse();
}

// ── Syntactic analyses ──────────────────────────────────────────────────────

inline int temporal_depth(Formula f) { return f->depth; }
inline int formula_size(Formula f) { return f->size; }

/// All subformulas, in deterministic structural order.
inline FormulaSet subformulas(Formula f) {
    FormulaSet out;
    std::vector<Formula> stack{f};
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        if (!out.insert(g).second) continue;
        for (auto a : g->args) stack.push_back(a);
    }
    return out;
}

/// Propositions occurring in f, sorted by name.
inline std::vector<std::string> propositions(Formula f) {
    std::set<std::string> names;
    for (auto g : subformulas(f))
        if (g->is_prop()) names.insert(g->name);
    return {names.begin(), names.end()};
}

inline int prop_occurrences(Formula f) {
    if (f->is_prop()) return 1;
    int n = 0;
    for (auto a : f->args) n += prop_occurrences(a);
    return n;
}

/// ~ψ: strips a top-level negation, otherwise adds one.
inline Formula negate_syntactic(Formula f) { return f->is_not() ? f->args[0] : lnot(f); }

/// The dual of a quantified formula: QOψ ↦ Q̄Ō~ψ, Q[ψOξ] ↦ Q̄[~ψ Ō ~ξ].
inline Formula dual_formula(Formula f) {
    if (!f->is_quant()) throw Error("dual", "dual of a non-temporal formula");
    if (is_binary(f->op))
        return quant(dual(f->q), dual(f->op), negate_syntactic(f->args[0]),
                     negate_syntactic(f->args[1]), f->tag);
    return quant(dual(f->q), dual(f->op), negate_syntactic(f->args[0]), nullptr, f->tag);
}

inline FormulaSet closure(Formula f) {
    FormulaSet cl;
    std::vector<Formula> work{f};
    auto push = [&](Formula g) {
        if (!cl.count(g)) work.push_back(g);
    };
    while (!work.empty()) {
        Formula g = work.back();
        work.pop_back();
        if (!cl.insert(g).second) continue;
        for (auto a : g->args) push(a);
        if (g->is_quant()) push(dual_formula(g));
        push(negate_syntactic(g));
    }
    return cl;
}

/// Negation normal form over {and, or, not}.
inline Formula to_nnf(Formula f, bool negated = false) {
    switch (f->kind) {
        case Kind::Prop:
            return negated ? lnot(f) : f;
        case Kind::Apply:
            if (f->is_not()) return to_nnf(f->args[0], !negated);
            if (f->is_and() || f->is_or()) {
                Formula a = to_nnf(f->args[0], negated), b = to_nnf(f->args[1], negated);
                return (f->is_and() != negated) ? land(a, b) : lor(a, b);
            }
            throw Error("not-std", "to_nnf: function '" + f->name + "' is not in the standard base");
        case Kind::Quant: {
            PathQ q = negated ? dual(f->q) : f->q;
            TOp op = negated ? dual(f->op) : f->op;
            if (is_binary(f->op))
                return quant(q, op, to_nnf(f->args[0], negated), to_nnf(f->args[1], negated), f->tag);
            return quant(q, op, to_nnf(f->args[0], negated), nullptr, f->tag);
        }
    }
    return f;
}

// ── Fragments ───────────────────────────────────────────────────────────────

/// Universal representative of an operator pair: AX, AF, AG, AU, AR.
inline TOp universal_rep(PathQ q, TOp op) { return q == PathQ::A ? op : dual(op); }

struct FragmentSpec {
    Base base = standard_base();
    std::set<TOp> operators;          // universal representatives
    std::optional<int> depth_bound;
};

struct FragmentCheck {
    bool ok = true;
    std::string diagnostic;
    explicit operator bool() const { return ok; }
};

inline FragmentCheck in_fragment(Formula f, const FragmentSpec& spec) {
    if (spec.depth_bound && temporal_depth(f) > *spec.depth_bound)
        return {false, "temporal depth " + std::to_string(temporal_depth(f)) + " exceeds bound " +
                           std::to_string(*spec.depth_bound)};
    std::vector<Formula> stack{f};
    std::unordered_set<Formula> seen;
    while (!stack.empty()) {
        Formula g = stack.back();
        stack.pop_back();
        if (!seen.insert(g).second) continue;
        if (g->is_apply() && !spec.base.contains(g->table))
            return {false, "function '" + g->name + "' not in base: " + render(g)};
        if (g->is_quant() && !spec.operators.count(universal_rep(g->q, g->op)))
            return {false, std::string("operator ") + q_char(g->q) + op_char(g->op) +
                               " not admitted: " + render(g)};
        for (auto a : g->args) stack.push_back(a);
    }
    return {};
}

/// Set of universal operator representatives used by f.
inline std::set<TOp> operators_used(Formula f) {
    std::set<TOp> ops;
    for (auto g : subformulas(f))
        if (g->is_quant()) ops.insert(universal_rep(g->q, g->op));
    return ops;
}

inline bool over_base(Formula f, const Base& b) {
    for (auto g : subformulas(f))
        if (g->is_apply() && !b.contains(g->table)) return false;
    return true;
}

// ── Occurrence tagging ──────────────────────────────────────────────────────

/// Give every quantified occurrence a distinct tag (1, 2, ... in DFS order).
inline Formula tag_occurrences(Formula f) {
    int next = 1;
    std::function<Formula(Formula)> go = [&](Formula g) -> Formula {
        if (g->is_prop()) return g;
        std::vector<Formula> args;
        for (auto a : g->args) args.push_back(go(a));
        if (g->is_apply()) return apply(g->table, args);
        return quant(g->q, g->op, args[0], args.size() > 1 ? args[1] : nullptr, next++);
    };
    return go(f);
}

inline Formula strip_tags(Formula f) {
    if (f->is_prop()) return f;
    std::vector<Formula> args;
    for (auto a : f->args) args.push_back(strip_tags(a));
    if (f->is_apply()) return apply(f->table, args);
    return quant(f->q, f->op, args[0], args.size() > 1 ? args[1] : nullptr, 0);
}

/// Substitute propositions by formulas.
inline Formula substitute(Formula f, const std::map<std::string, Formula>& sub) {
    if (f->is_prop()) {
        auto it = sub.find(f->name);
        return it == sub.end() ? f : it->second;
    }
    std::vector<Formula> args;
    for (auto a : f->args) args.push_back(substitute(a, sub));
    if (f->is_apply()) return apply(f->table, args);
    return quant(f->q, f->op, args[0], args.size() > 1 ? args[1] : nullptr, f->tag);
}

} // namespace ctlf

#endif // CTLF_FORMULA_HPP
