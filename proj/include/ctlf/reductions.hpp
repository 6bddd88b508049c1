// ============================================================================
// ctlf/reductions.hpp: QBF and alternating-TM reductions, formula families
// ============================================================================
//
// All generators use deterministic proposition names so that output is
// byte-stable; every emitted formula renders in the standard syntax and
// parses back with parse_formula.
//
// ============================================================================

#ifndef CTLF_REDUCTIONS_HPP
#define CTLF_REDUCTIONS_HPP

#include "ctlf/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <tuple>

namespace ctlf {

namespace red_detail {

inline Formula P(const std::string& name) { return prop(name); }
inline Formula imp(Formula a, Formula b) { return limp(a, b); }
inline Formula iff(Formula a, Formula b) { return liff(a, b); }
inline Formula falsum(Formula p) { return land(p, lnot(p)); }
inline Formula verum(Formula p) { return lor(p, lnot(p)); }

inline int ceil_log2(int m) {
    int b = 0;
    while ((1 << b) < m) ++b;
    return b;
}

/// Conjunction of `width` literals over prefix1..prefixwidth encoding value,
/// bit 1 most significant, positive literal for bit value 1.
inline Formula binary_vector(const std::string& prefix, int value, int width) {
    std::vector<Formula> lits;
    for (int b = 1; b <= width; ++b) {
        bool bit = (value >> (width - b)) & 1;
        Formula v = P(prefix + std::to_string(b));
        lits.push_back(bit ? v : lnot(v));
    }
    return conj(lits);
}

/// At most one of x1..xm, via carry propositions xl<i> (no x left of i)
/// and xg<i> (no x right of i).
inline Formula at_most_one(const std::string& x, int m) {
    auto v = [&](const std::string& s, int i) { return P(s + std::to_string(i)); };
    std::vector<Formula> parts;
    for (int i = 1; i <= m; ++i) parts.push_back(imp(v(x, i), land(v(x + "l", i), v(x + "g", i))));
    for (int i = 2; i <= m; ++i)
        parts.push_back(imp(v(x + "l", i), land(v(x + "l", i - 1), lnot(v(x, i - 1)))));
    for (int i = 1; i <= m - 1; ++i)
        parts.push_back(imp(v(x + "g", i), land(v(x + "g", i + 1), lnot(v(x, i + 1)))));
    return conj(parts);
}

} // namespace red_detail

// ── QBF ─────────────────────────────────────────────────────────────────────

struct Qbf {
    std::vector<std::pair<char, std::string>> prefix;  // 'A' or 'E'
    Formula matrix = nullptr;
};

inline std::string render_qbf(const Qbf& q) {
    std::string s;
    for (auto& [k, v] : q.prefix) s += std::string(1, k) + " " + v + " ";
    return s + ": " + render(q.matrix);
}

/// Prenex syntax `A x E y : matrix`; a quantifier letter may bind several
/// variables (`A x y : ...`).
inline Qbf parse_qbf(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw Error("syntax", "QBF needs ':' between prefix and matrix");
    Qbf q;
    std::istringstream in(text.substr(0, colon));
    std::string tok;
    char cur = 0;
    std::set<std::string> vars;
    while (in >> tok) {
        if (tok == "A" || tok == "E") {
            cur = tok[0];
            continue;
        }
        if (!cur) throw Error("syntax", "variable '" + tok + "' before any quantifier");
        if (!valid_identifier(tok)) throw Error("syntax", "invalid variable name '" + tok + "'");
        if (!vars.insert(tok).second) throw Error("duplicate", "variable '" + tok + "' quantified twice");
        q.prefix.push_back({cur, tok});
    }
    q.matrix = parse_formula(text.substr(colon + 1));
    if (temporal_depth(q.matrix) > 0) throw Error("non-prenex", "QBF matrix must be propositional");
    for (auto& p : propositions(q.matrix))
        if (!vars.count(p)) throw Error("free-variable", "variable '" + p + "' is not quantified");
    return q;
}

namespace red_detail {

inline bool eval_prop(Formula f, const std::map<std::string, bool>& a) {
    if (f->is_prop()) return a.at(f->name);
    std::size_t idx = 0;
    for (auto x : f->args) idx = (idx << 1) | (eval_prop(x, a) ? 1u : 0u);
    return f->table.out.at(idx);
}

inline bool qbf_rec(const Qbf& q, std::size_t i, std::map<std::string, bool>& a) {
    if (i == q.prefix.size()) return eval_prop(q.matrix, a);
    auto& [k, v] = q.prefix[i];
    bool any = false, all = true;
    for (bool b : {false, true}) {
        a[v] = b;
        bool r = qbf_rec(q, i + 1, a);
        any = any || r;
        all = all && r;
    }
    a.erase(v);
    return k == 'A' ? all : any;
}

} // namespace red_detail

inline bool qbf_eval(const Qbf& q) {
    std::map<std::string, bool> a;
    return red_detail::qbf_rec(q, 0, a);
}

/// Tree of partial assignments; values[v] is -1 (undefined), 0 or 1.
struct ProofTree {
    struct Node {
        std::vector<int> values;
        int parent = -1;
        std::vector<int> children;
    };
    std::vector<Node> nodes;  // nodes[0] is the root
};

inline std::optional<ProofTree> qbf_proof_tree(const Qbf& q) {
    const int n = int(q.prefix.size());
    ProofTree t;
    std::map<std::string, bool> a;
    // builds the subtree for `values` at depth i; returns its index or -1
    std::function<int(std::vector<int>&, int, int)> build = [&](std::vector<int>& values, int i, int parent) -> int {
        if (i == n) {
            if (!red_detail::eval_prop(q.matrix, a)) return -1;
            t.nodes.push_back({values, parent, {}});
            return int(t.nodes.size()) - 1;
        }
        const auto& [k, v] = q.prefix[i];
        for (bool b : {false, true}) {
            a[v] = b;
            bool ok = red_detail::qbf_rec(q, i + 1, a);
            if (k == 'A' && !ok) {
                a.erase(v);
                return -1;
            }
        }
        a.erase(v);
        int self = int(t.nodes.size());
        t.nodes.push_back({values, parent, {}});
        for (bool b : {false, true}) {
            a[v] = b;
            if (!red_detail::qbf_rec(q, i + 1, a)) continue;
            values[i] = b;
            int c = build(values, i + 1, self);
            values[i] = -1;
            t.nodes[self].children.push_back(c);
            if (k == 'E') break;
        }
        a.erase(v);
        return self;
    };
    std::vector<int> values(n, -1);
    if (!qbf_eval(q)) return std::nullopt;
    build(values, 0, -1);
    return t;
}

/// Check the three proof-tree conditions.
inline bool validate_proof_tree(const Qbf& q, const ProofTree& t) {
    const int n = int(q.prefix.size());
    if (t.nodes.empty()) return false;
    for (int v : t.nodes[0].values)
        if (v != -1) return false;
    for (const auto& node : t.nodes) {
        int m = 0;
        while (m < n && node.values[m] != -1) ++m;
        for (int j = m; j < n; ++j)
            if (node.values[j] != -1) return false;
        if (m == n) {
            std::map<std::string, bool> a;
            for (int j = 0; j < n; ++j) a[q.prefix[j].second] = node.values[j] == 1;
            if (!red_detail::eval_prop(q.matrix, a) || !node.children.empty()) return false;
            continue;
        }
        std::set<int> bits;
        for (int c : node.children) {
            const auto& cv = t.nodes.at(c).values;
            for (int j = 0; j < n; ++j)
                if (j != m && cv[j] != node.values[j]) return false;
            if (cv[m] == -1) return false;
            bits.insert(cv[m]);
        }
        if (q.prefix[m].first == 'A' ? bits.size() != 2 : bits.empty()) return false;
    }
    return true;
}

namespace red_detail {

inline void reserve_names(const Qbf& q, const std::function<bool(const std::string&)>& reserved) {
    for (auto& [k, v] : q.prefix)
        if (reserved(v)) throw Error("name-clash", "variable '" + v + "' collides with a reduction proposition");
}

inline bool numbered(const std::string& v, const std::string& prefix) {
    if (v.size() <= prefix.size() || v.compare(0, prefix.size(), prefix) != 0) return false;
    for (std::size_t i = prefix.size(); i < v.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(v[i]))) return false;
    return true;
}

} // namespace red_detail

/// Flattened proof tree on a single path, in the AF/EG fragment.
inline Formula reduce_qbf_af(const Qbf& q) {
    using namespace red_detail;
    reserve_names(q, [](const std::string& v) {
        for (auto p : {"s", "b", "t", "tp", "f", "fp"})
            if (numbered(v, p)) return true;
        return v == "e";
    });
    const int n = int(q.prefix.size());
    auto v = [](const std::string& s, int i) { return P(s + std::to_string(i)); };
    std::vector<Formula> body{q.matrix, imp(P("e"), v("b", 1))};
    for (int i = 1; i <= n; ++i) {
        Formula s = v("s", i), b = v("b", i), t = v("t", i), tp = v("tp", i), f = v("f", i), fp = v("fp", i);
        Formula s1 = v("s", i + 1), b1 = v("b", i + 1), nb = lnot(b);
        Formula alpha;
        if (q.prefix[i - 1].first == 'A') {
            alpha = conj({imp(s, AF(land(t, nb))), imp(t, land(s1, AF(land(tp, nb)))),
                          imp(tp, land(b1, AF(land(f, nb)))), imp(f, land(s1, AF(land(fp, nb)))), imp(fp, b1)});
        } else {
            alpha = conj({imp(s, AF(land(lor(t, f), nb))), imp(t, land(s1, AF(land(tp, nb)))), imp(tp, b1),
                          imp(f, land(s1, AF(land(fp, nb)))), imp(fp, b1)});
        }
        Formula beta = imp(b, EG(b));
        Formula x = P(q.prefix[i - 1].second);
        Formula gamma = land(imp(AF(tp), x), imp(AF(fp), lnot(x)));
        body.push_back(conj({alpha, beta, gamma}));
    }
    return conj({v("s", 1), AF(P("e")), EG(conj(body))});
}

/// Proof tree spanned by EF-successors, in the AG/EF fragment.
inline Formula reduce_qbf_ag(const Qbf& q) {
    using namespace red_detail;
    reserve_names(q, [](const std::string& v) { return numbered(v, "y") || numbered(v, "z"); });
    const int n = int(q.prefix.size());
    auto v = [](const std::string& s, int i) { return P(s + std::to_string(i)); };
    std::vector<Formula> body{imp(lor(v("y", n), v("z", n)), q.matrix)};
    for (int i = 1; i <= n; ++i) {
        Formula x = P(q.prefix[i - 1].second);
        Formula ey = EF(v("y", i)), ez = EF(v("z", i));
        Formula branch = q.prefix[i - 1].first == 'A' ? land(ey, ez) : lor(ey, ez);
        body.push_back(conj({imp(lor(v("y", i - 1), v("z", i - 1)), branch), imp(v("y", i), AG(x)),
                             imp(v("z", i), AG(lnot(x)))}));
    }
    return land(v("y", 0), AG(conj(body)));
}

// ── Alternating Turing machines ─────────────────────────────────────────────

struct AtmTransition {
    std::string state;
    char write = 0;
    int move = 0;  // -1, 0, +1
};

struct Atm {
    std::vector<std::string> states;          // declaration order
    std::set<std::string> universal;
    std::string init, accept, reject;
    char blank = '_';
    std::string input_alphabet;               // empty: every non-blank tape symbol
    std::map<std::pair<std::string, char>, std::vector<AtmTransition>> delta;
    int space = 0;

    bool halting(const std::string& q) const { return q == accept || q == reject; }

    /// Tape alphabet: blank, input symbols and every symbol in δ, sorted.
    std::string tape_alphabet() const {
        std::set<char> g{blank};
        for (char c : input_alphabet) g.insert(c);
        for (auto& [k, ts] : delta) {
            g.insert(k.second);
            for (auto& t : ts) g.insert(t.write);
        }
        return {g.begin(), g.end()};
    }
    std::string sigma() const {
        if (!input_alphabet.empty()) return input_alphabet;
        std::string s;
        for (char c : tape_alphabet())
            if (c != blank) s += c;
        return s;
    }
};

namespace red_detail {

inline bool valid_symbol(const std::string& s) {
    return s.size() == 1 && (std::islower(static_cast<unsigned char>(s[0])) ||
                             std::isdigit(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

} // namespace red_detail

/// Line format: `state <q> exists|forall`, `accept <q>`, `reject <q>`,
/// `init <q>`, `blank <c>`, `input <c...>`, `trans <q> <a> -> <q'> <a'> L|S|R`,
/// `space <n>`; `#` starts a comment.
inline Atm parse_atm(const std::string& text) {
    Atm m;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto bad = [&](const std::string& why) {
        throw Error("atm", "line " + std::to_string(lineno) + ": " + why);
    };
    auto add_state = [&](const std::string& q) {
        if (!valid_identifier(q)) bad("invalid state name '" + q + "'");
        if (std::find(m.states.begin(), m.states.end(), q) == m.states.end()) m.states.push_back(q);
    };
    auto sym = [&](const std::string& s) {
        if (!red_detail::valid_symbol(s)) bad("symbols are single characters [a-z0-9_], got '" + s + "'");
        return s[0];
    };
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (kw == "state") {
            if (tok.size() != 2 || (tok[1] != "exists" && tok[1] != "forall")) bad("expected: state <q> exists|forall");
            add_state(tok[0]);
            if (tok[1] == "forall") m.universal.insert(tok[0]);
        } else if (kw == "accept" || kw == "reject" || kw == "init") {
            if (tok.size() != 1) bad("expected: " + kw + " <q>");
            add_state(tok[0]);
            (kw == "accept" ? m.accept : kw == "reject" ? m.reject : m.init) = tok[0];
        } else if (kw == "blank") {
            if (tok.size() != 1) bad("expected: blank <c>");
            m.blank = sym(tok[0]);
        } else if (kw == "input") {
            for (auto& t : tok) m.input_alphabet += sym(t);
        } else if (kw == "space") {
            if (tok.size() != 1) bad("expected: space <n>");
            m.space = std::stoi(tok[0]);
        } else if (kw == "trans") {
            if (tok.size() != 6 || tok[2] != "->") bad("expected: trans <q> <a> -> <q'> <a'> L|S|R");
            add_state(tok[0]);
            add_state(tok[3]);
            int mv = tok[5] == "L" ? -1 : tok[5] == "S" ? 0 : tok[5] == "R" ? 1 : 2;
            if (mv == 2) bad("move must be L, S or R");
            m.delta[{tok[0], sym(tok[1])}].push_back({tok[3], sym(tok[4]), mv});
        } else {
            bad("unknown keyword '" + kw + "'");
        }
    }
    if (m.init.empty() || m.accept.empty() || m.reject.empty()) throw Error("atm", "init, accept and reject are required");
    if (m.accept == m.reject) throw Error("atm", "accepting and rejecting states must differ");
    if (m.space < 1) throw Error("atm", "space bound must be positive");
    if (m.input_alphabet.find(m.blank) != std::string::npos) throw Error("atm", "blank must not be an input symbol");
    for (auto& q : m.states) {
        if (m.halting(q)) continue;
        for (char a : m.tape_alphabet())
            if (!m.delta.count({q, a}))
                throw Error("atm", "no transition for state '" + q + "' on '" + std::string(1, a) + "'");
    }
    return m;
}

inline void check_input(const Atm& m, const std::string& input) {
    const auto sigma = m.sigma();
    for (char c : input)
        if (sigma.find(c) == std::string::npos)
            throw Error("alphabet", "input symbol '" + std::string(1, c) + "' not in the input alphabet");
    if (int(input.size()) > m.space) throw Error("alphabet", "input longer than the space bound");
}

/// Direct acceptance by memoized recursion over configurations.  Moving off
/// the tape [1, space] is a dead, non-accepting successor.
inline bool simulate_atm(const Atm& m, const std::string& input, std::size_t max_configs = 100'000) {
    check_input(m, input);
    using Config = std::tuple<std::string, int, std::string>;
    std::map<Config, int> memo;  // 0 in progress, 1 accept, 2 reject
    std::function<bool(const Config&)> acc = [&](const Config& c) -> bool {
        auto [q, i, tape] = c;
        if (q == m.reject) return false;
        if (q == m.accept) return true;
        auto it = memo.find(c);
        if (it != memo.end()) {
            if (it->second == 0) throw Error("non-halting", "machine loops from state '" + q + "'");
            return it->second == 1;
        }
        if (memo.size() >= max_configs) throw Error("budget", "configuration limit exceeded");
        memo[c] = 0;
        const bool forall = m.universal.count(q) > 0;
        bool result = forall;
        for (auto& t : m.delta.at({q, tape[i - 1]})) {
            int j = i + t.move;
            bool r = false;
            if (j >= 1 && j <= m.space) {
                std::string nt = tape;
                nt[i - 1] = t.write;
                r = acc({t.state, j, nt});
            }
            if (forall && !r) { result = false; break; }
            if (!forall && r) { result = true; break; }
        }
        memo[c] = result ? 1 : 2;
        return result;
    };
    std::string tape = input + std::string(m.space - input.size(), m.blank);
    return acc({m.init, 1, tape});
}

enum class AtmVariant { AgAx, AgAf, Au, Ar };

inline AtmVariant parse_atm_variant(const std::string& s) {
    if (s == "ag_ax") return AtmVariant::AgAx;
    if (s == "ag_af") return AtmVariant::AgAf;
    if (s == "au") return AtmVariant::Au;
    if (s == "ar") return AtmVariant::Ar;
    throw Error("usage", "unknown ATM variant '" + s + "'");
}

inline std::set<TOp> atm_variant_operators(AtmVariant v) {
    switch (v) {
        case AtmVariant::AgAx: return {TOp::G, TOp::X};
        case AtmVariant::AgAf: return {TOp::G, TOp::F};
        case AtmVariant::Au: return {TOp::U};
        case AtmVariant::Ar: return {TOp::R};
    }
    return {};
}

namespace red_detail {

struct AtmNames {
    static Formula s(const std::string& q) { return P("s_" + q); }
    static Formula p(int i) { return P("p" + std::to_string(i)); }
    static Formula t(int i, char a) { return P("t" + std::to_string(i) + "_" + std::string(1, a)); }
    static Formula k(int j, char a) { return P("k" + std::to_string(j) + "_" + std::string(1, a)); }
    static Formula u(const std::string& q, int i, char a) {
        return P("u_" + q + "_" + std::to_string(i) + "_" + std::string(1, a));
    }
};

/// Replace AG by AU-until-halted, AF of an underlined successor atom by
/// A[!h U (!h & atom)], other AF by A[T U .], EG by !A[T U !.].
inline Formula rewrite_au(Formula f, Formula h, const std::set<Formula>& underlined) {
    if (f->is_prop()) return f;
    std::vector<Formula> a;
    for (auto x : f->args) a.push_back(rewrite_au(x, h, underlined));
    if (f->is_apply()) return apply(f->table, a);
    if (f->q == PathQ::A && f->op == TOp::G) return AU(a[0], h);
    if (f->q == PathQ::A && f->op == TOp::F) {
        if (underlined.count(f->args[0])) return AU(lnot(h), land(lnot(h), a[0]));
        return AU(verum(h), a[0]);
    }
    if (f->q == PathQ::E && f->op == TOp::G) return lnot(AU(verum(h), lnot(a[0])));
    throw std::logic_error("rewrite_au: unexpected operator in " + render(f));
}

} // namespace red_detail

/// Formula satisfiable iff m accepts input, in the variant's fragment.
inline Formula encode_atm(const Atm& m, const std::string& input, AtmVariant variant) {
    using namespace red_detail;
    using N = AtmNames;
    check_input(m, input);
    const int g = m.space;
    const std::string gamma = m.tape_alphabet();
    const bool af_style = variant == AtmVariant::AgAf || variant == AtmVariant::Au;
    Formula b = P("b"), h = P("h"), bot = falsum(N::p(1));

    std::vector<Formula> init{N::s(m.init), N::p(1)};
    for (int i = 1; i <= g; ++i) init.push_back(N::t(i, i <= int(input.size()) ? input[i - 1] : m.blank));
    if (af_style) init.push_back(lnot(b));
    if (variant == AtmVariant::Au) init.push_back(lnot(h));

    auto exactly_one = [](const std::vector<Formula>& xs) {
        std::vector<Formula> alts;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            std::vector<Formula> c{xs[i]};
            for (std::size_t j = 0; j < xs.size(); ++j)
                if (j != i) c.push_back(lnot(xs[j]));
            alts.push_back(conj(c));
        }
        return disj(alts);
    };
    std::vector<Formula> sv, pv;
    for (auto& q : m.states) sv.push_back(N::s(q));
    for (int i = 1; i <= g; ++i) pv.push_back(N::p(i));
    std::vector<Formula> conf{exactly_one(sv), exactly_one(pv)};
    for (int i = 1; i <= g; ++i) {
        std::vector<Formula> tv;
        for (char a : gamma) tv.push_back(N::t(i, a));
        conf.push_back(exactly_one(tv));
    }

    auto keep = [&](int j, char a) {
        Formula t = N::t(j, a);
        return land(imp(AF(land(b, t)), land(t, AF(land(lnot(b), t)))),
                    imp(AF(land(lnot(b), t)), land(t, AF(land(b, t)))));
    };
    std::set<Formula> underlined;

    auto next = [&](const std::string& q2, int i, int i2, char a2) -> Formula {
        if (i2 < 1 || i2 > g) return bot;
        Formula target = conj({N::s(q2), N::p(i2), N::t(i, a2)});
        std::vector<Formula> frame;
        switch (variant) {
            case AtmVariant::AgAx:
                for (int j = 1; j <= g; ++j)
                    if (j != i)
                        for (char a : gamma) {
                            Formula t = N::t(j, a);
                            frame.push_back(land(imp(t, AX(t)), imp(lnot(t), AX(lnot(t)))));
                        }
                return frame.empty() ? EX(target) : land(EX(target), conj(frame));
            case AtmVariant::AgAf:
            case AtmVariant::Au: {
                for (int j = 1; j <= g; ++j)
                    if (j != i)
                        for (char a : gamma) frame.push_back(N::k(j, a));
                Formula u = N::u(q2, i2, a2);
                underlined.insert(u);
                frame.push_back(imp(u, target));
                return land(EG(conj(frame)), AF(u));
            }
            case AtmVariant::Ar: {
                std::vector<Formula> parts;
                for (auto& q : m.states)
                    for (char a : gamma) {
                        Formula cur = conj({N::s(q), N::p(i), N::t(i, a)});
                        parts.push_back(imp(cur, EU(cur, target)));
                        for (int j = 1; j <= g; ++j)
                            if (j != i)
                                for (char c : gamma) parts.push_back(imp(N::t(j, c), AR(lnot(cur), N::t(j, c))));
                    }
                return conj(parts);
            }
        }
        return bot;
    };

    std::vector<Formula> rules;
    for (auto& q : m.states) {
        if (m.halting(q)) continue;
        const bool forall = m.universal.count(q) > 0;
        for (char a : gamma)
            for (int i = 1; i <= g; ++i) {
                std::vector<Formula> succ;
                for (auto& t : m.delta.at({q, a})) succ.push_back(next(t.state, i, i + t.move, t.write));
                rules.push_back(imp(conj({N::s(q), N::p(i), N::t(i, a)}), forall ? conj(succ) : disj(succ)));
            }
    }
    Formula body = rules.empty() ? verum(N::s(m.accept)) : conj(rules);
    Formula delta = lor(N::s(m.accept), land(lnot(N::s(m.reject)), body));

    auto always = [&](Formula x) { return variant == AtmVariant::Ar ? AR(bot, x) : AG(x); };
    std::vector<Formula> top{conj(init), always(conj(conf)), always(delta)};
    if (af_style) {
        std::vector<Formula> defs;
        for (int j = 1; j <= g; ++j)
            for (char a : gamma) defs.push_back(iff(N::k(j, a), keep(j, a)));
        top.push_back(AG(conj(defs)));
    }
    Formula f = conj(top);
    if (variant == AtmVariant::Au) f = rewrite_au(f, h, underlined);
    return f;
}

// ── Formula families ────────────────────────────────────────────────────────

struct Family {
    Formula formula = nullptr;
    std::set<TOp> operators;  // universal representatives
    int depth = 0;
};

inline const std::vector<std::string>& family_names() {
    static const std::vector<std::string> names{"ax",       "counter_agax", "counter_ar", "flat_axag",
                                                "flat_agaf", "flat_au",      "flat_ar",    "flat_af",
                                                "flat_af_extent", "existential"};
    return names;
}

/// Generate a lower-bound family member; m, k, n as applicable (each ≥ 1).
inline Family generate_family(const std::string& kind, int m = 2, int k = 2, int n = 1) {
    using namespace red_detail;
    if (m < 1 || k < 1 || n < 1) throw Error("usage", "family parameters must be at least 1");
    auto v = [](const std::string& s, int i) { return P(s + std::to_string(i)); };
    Family fam;

    if (kind == "ax") {
        const int L = std::max(1, ceil_log2(m));
        auto pst = [](int s, int t) { return P("p" + std::to_string(s) + "_" + std::to_string(t)); };
        auto cvec = [&](int i, int j) {
            std::vector<Formula> lits;
            for (int b = 1; b <= L; ++b) lits.push_back(((j >> (L - b)) & 1) ? pst(i, b) : lnot(pst(i, b)));
            return conj(lits);
        };
        auto psi = [&](int i) {
            std::vector<Formula> parts;
            for (int j = 0; j < m; ++j) parts.push_back(EX(cvec(i, j)));
            for (int s = 1; s < i; ++s)
                for (int t = 0; t <= ceil_log2(m); ++t)
                    parts.push_back(land(imp(pst(s, t), AX(pst(s, t))), imp(lnot(pst(s, t)), AX(lnot(pst(s, t))))));
            return conj(parts);
        };
        Formula f = psi(k);
        for (int i = k - 1; i >= 1; --i) f = land(psi(i), AX(f));
        fam = {f, {TOp::X}, k};
    } else if (kind == "counter_agax" || kind == "counter_ar") {
        const bool ar = kind == "counter_ar";
        Formula p0 = v("p", 0);
        auto carry = [&](int i) { return v("carry_le", i); };
        auto reset = [&](int i) { return v("reset_le", i); };
        auto store_ge = [&](int i) { return v("store_ge", i); };
        auto store = [&](int i) { return v("store", i); };
        std::vector<Formula> alpha{iff(p0, carry(0)), imp(reset(0), lnot(p0))};
        for (int i = 1; i <= n; ++i) {
            alpha.push_back(iff(land(v("p", i), carry(i - 1)), carry(i)));
            alpha.push_back(imp(reset(i), land(lnot(v("p", i)), reset(i - 1))));
        }
        for (int i = 1; i <= n + 1; ++i) alpha.push_back(imp(store_ge(i - 1), land(store(i - 1), store_ge(i))));
        std::vector<Formula> beta, gamma;
        for (int i = 1; i <= n; ++i) {
            Formula p = v("p", i);
            if (!ar) {
                beta.push_back(imp(store(i), land(imp(p, AX(p)), imp(lnot(p), AX(lnot(p))))));
            } else {
                Formula odd = land(imp(p, AR(lnot(p0), p)), imp(lnot(p), AR(lnot(p0), lnot(p))));
                Formula even = land(imp(p, AR(p0, p)), imp(lnot(p), AR(p0, lnot(p))));
                beta.push_back(imp(store(i), land(imp(p0, odd), imp(lnot(p0), even))));
            }
            Formula flip = ar ? EU(p0, land(p, reset(i - 1))) : AX(land(p, reset(i - 1)));
            gamma.push_back(imp(land(carry(i - 1), lnot(p)), land(flip, store_ge(i + 1))));
        }
        gamma.push_back(imp(lnot(p0), land(ar ? EU(lnot(p0), p0) : AX(p0), store_ge(1))));
        Formula body = conj({conj(alpha), conj(beta), conj(gamma)});
        std::vector<Formula> zero;
        for (int i = 0; i <= n; ++i) zero.push_back(lnot(v("p", i)));
        Formula always = ar ? AR(falsum(p0), body) : AG(body);
        fam = {land(always, conj(zero)), ar ? std::set<TOp>{TOp::R} : std::set<TOp>{TOp::G, TOp::X}, 2};
    } else if (kind == "flat_axag") {
        std::vector<Formula> parts{AX(at_most_one("p", m))};
        for (int i = 1; i <= m; ++i) parts.push_back(EX(v("p", i)));
        fam = {conj(parts), {TOp::X}, 1};
    } else if (kind == "flat_agaf") {
        Formula r = P("r");
        std::vector<Formula> parts{AG(land(at_most_one("p", m), at_most_one("q", m)))};
        for (int i = 1; i <= m; ++i) parts.push_back(EG(lor(r, v("p", i))));
        for (int j = 1; j <= m; ++j) parts.push_back(AF(land(v("q", j), lnot(r))));
        fam = {conj(parts), {TOp::G, TOp::F}, 1};
    } else if (kind == "flat_au") {
        Formula r = P("r"), sp = at_most_one("p", m), qm = v("q", m);
        std::vector<Formula> parts{AU(sp, land(sp, qm))};
        for (int i = 1; i <= m; ++i) parts.push_back(ER(qm, lor(v("p", i), r)));
        for (int i = 1; i <= m - 1; ++i) parts.push_back(AU(lnot(v("q", i + 1)), land(lnot(r), v("q", i))));
        fam = {conj(parts), {TOp::U}, 1};
    } else if (kind == "flat_ar") {
        Formula r = P("r"), sp = at_most_one("p", m), qm = v("q", m);
        std::vector<Formula> parts{AR(falsum(v("p", 1)), sp)};
        for (int i = 1; i <= m; ++i) parts.push_back(EU(lor(v("p", i), r), qm));
        for (int i = 1; i <= m; ++i) parts.push_back(AR(land(v("q", i), lnot(r)), lnot(v("q", i + 1))));
        fam = {conj(parts), {TOp::R}, 1};
    } else if (kind == "flat_af") {
        const int L = std::max(1, ceil_log2(m));
        Formula r = P("r");
        std::vector<Formula> parts;
        for (int i = 0; i < m; ++i) parts.push_back(AF(land(binary_vector("c", i, L), lnot(r))));
        for (int i = 0; i < m; ++i) parts.push_back(EG(lor(r, binary_vector("d", i, L))));
        fam = {conj(parts), {TOp::F}, 1};
    } else if (kind == "flat_af_extent") {
        std::vector<Formula> parts{EG(at_most_one("p", m))};
        for (int i = 1; i <= m; ++i) parts.push_back(AF(v("p", i)));
        fam = {conj(parts), {TOp::F}, 1};
    } else if (kind == "existential") {
        const int L = std::max(1, ceil_log2(m + 2));
        std::vector<Formula> parts;
        for (int i = 1; i <= m + 1; ++i) parts.push_back(EF(binary_vector("c", i, L)));
        fam = {conj(parts), {TOp::G}, 1};
    } else {
        throw Error("usage", "unknown family '" + kind + "'");
    }
    return fam;
}

} // namespace ctlf

#endif // CTLF_REDUCTIONS_HPP
