// ============================================================================
// ctlf/clones.hpp: Boolean clones and formula translations between bases
// ============================================================================
//
// Truth tables of arity k ≤ 5 are packed into 32-bit masks: bit idx holds the
// output on the input tuple idx (first argument most significant), matching
// TruthTable::at.
//
// ============================================================================

#ifndef CTLF_CLONES_HPP
#define CTLF_CLONES_HPP

#include "ctlf/bdd.hpp"
#include "ctlf/sat_common.hpp"

#include <cstdint>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace ctlf {

// ── Truth-table predicates ──────────────────────────────────────────────────

inline bool is_monotone(const TruthTable& t) {
    const std::size_t rows = std::size_t(1) << t.arity;
    for (std::size_t idx = 0; idx < rows; ++idx)
        for (int i = 0; i < t.arity; ++i) {
            std::size_t bit = std::size_t(1) << (t.arity - 1 - i);
            if (!(idx & bit) && t.at(idx) && !t.at(idx | bit)) return false;
        }
    return true;
}

/// Index of an argument that is 1 whenever the output is 1, if any.
inline std::optional<int> one_separating_argument(const TruthTable& t) {
    const std::size_t rows = std::size_t(1) << t.arity;
    for (int i = 0; i < t.arity; ++i) {
        std::size_t bit = std::size_t(1) << (t.arity - 1 - i);
        bool ok = true;
        for (std::size_t idx = 0; idx < rows && ok; ++idx)
            if (t.at(idx) && !(idx & bit)) ok = false;
        if (ok) return i;
    }
    return std::nullopt;
}

inline bool is_one_separating(const TruthTable& t) { return one_separating_argument(t).has_value(); }

// ── Clone slices ────────────────────────────────────────────────────────────

inline constexpr int kCloneArityCap = 3;

namespace clone_detail {

inline std::uint32_t pack(const TruthTable& t) {
    if (t.arity > 5) throw Error("cap", "table '" + t.name + "' too wide to pack");
    std::uint32_t m = 0;
    for (std::size_t idx = 0; idx < t.out.size(); ++idx)
        if (t.out[idx]) m |= std::uint32_t(1) << idx;
    return m;
}

inline TruthTable unpack(std::uint32_t m, int arity, const std::string& name = "") {
    std::vector<std::uint8_t> o(std::size_t(1) << arity);
    for (std::size_t idx = 0; idx < o.size(); ++idx) o[idx] = (m >> idx) & 1u;
    TruthTable t(name, arity, std::move(o));
    if (t.name.empty()) t.name = "f" + t.bits();
    return t;
}

/// Projection onto argument i as a k-ary mask.
inline std::uint32_t projection(int k, int i) {
    std::uint32_t m = 0;
    for (std::size_t idx = 0; idx < (std::size_t(1) << k); ++idx)
        if ((idx >> (k - 1 - i)) & 1u) m |= std::uint32_t(1) << idx;
    return m;
}

/// g applied pointwise to k-ary masks.
inline std::uint32_t compose(const TruthTable& g, const std::vector<std::uint32_t>& args, int k) {
    std::uint32_t m = 0;
    for (std::size_t idx = 0; idx < (std::size_t(1) << k); ++idx) {
        std::size_t row = 0;
        for (auto a : args) row = (row << 1) | ((a >> idx) & 1u);
        if (g.at(row)) m |= std::uint32_t(1) << idx;
    }
    return m;
}

} // namespace clone_detail

struct CloneSlice {
    int arity = 0;
    std::set<std::uint32_t> masks;

    bool contains(const TruthTable& t) const {
        return t.arity == arity && masks.count(clone_detail::pack(t)) > 0;
    }
    std::size_t size() const { return masks.size(); }
    std::vector<TruthTable> tables() const {
        std::vector<TruthTable> v;
        for (auto m : masks) v.push_back(clone_detail::unpack(m, arity));
        return v;
    }
};

/// Arity-k members of the clone generated by base, by semi-naive fixpoint
/// from the projections.
inline CloneSlice clone_slice(const Base& base, int arity, int cap = kCloneArityCap) {
    if (arity < 0 || arity > cap || arity > 5)
        throw Error("cap", "clone slice arity " + std::to_string(arity) + " above cap " + std::to_string(cap));
    using clone_detail::compose;
    std::vector<std::uint32_t> members;
    std::set<std::uint32_t> seen;
    auto add = [&](std::uint32_t m) {
        if (seen.insert(m).second) members.push_back(m);
    };
    const std::uint32_t full = arity == 5 ? ~0u : ((std::uint32_t(1) << (1u << arity)) - 1);
    for (int i = 0; i < arity; ++i) add(clone_detail::projection(arity, i));
    const auto fns = base.functions();
    for (auto& g : fns)
        if (g.arity == 0) add(g.at(0) ? full : 0u);
    std::size_t frontier = 0;
    while (frontier < members.size()) {
        const std::size_t end = members.size();
        for (auto& g : fns) {
            if (g.arity == 0) continue;
            std::vector<std::size_t> pick(g.arity, 0);
            std::vector<std::uint32_t> args(g.arity);
            while (true) {
                bool fresh = false;
                for (int j = 0; j < g.arity; ++j) {
                    args[j] = members[pick[j]];
                    if (pick[j] >= frontier) fresh = true;
                }
                if (fresh) add(compose(g, args, arity));
                int j = g.arity - 1;
                while (j >= 0 && ++pick[j] == end) pick[j--] = 0;
                if (j < 0) break;
            }
        }
        frontier = end;
    }
    CloneSlice s;
    s.arity = arity;
    s.masks.insert(members.begin(), members.end());
    return s;
}

inline bool clone_generates(const Base& base, const TruthTable& f, int cap = kCloneArityCap) {
    return clone_slice(base, f.arity, cap).contains(f);
}

// ── Representations ─────────────────────────────────────────────────────────

/// An expression over base functions and placeholder propositions.
struct Representation {
    Formula expr = nullptr;
    std::vector<std::string> vars;
    int nodes = 0;
    std::size_t candidates = 0;
};

inline std::vector<std::string> placeholder_names(int n) {
    static const char* small[] = {"x", "y", "z"};
    std::vector<std::string> v;
    for (int i = 0; i < n; ++i) v.push_back(n <= 3 ? small[i] : "x" + std::to_string(i + 1));
    return v;
}

/// Function-call rendering, e.g. not(or(not(x), not(y))).
inline std::string render_call(Formula f) {
    if (f->is_prop()) return f->name;
    if (f->is_quant()) {
        std::string s(1, q_char(f->q));
        if (is_binary(f->op))
            return s + "[" + render_call(f->args[0]) + " " + op_char(f->op) + " " + render_call(f->args[1]) + "]";
        return s + op_char(f->op) + "(" + render_call(f->args[0]) + ")";
    }
    std::string s = f->name;
    if (f->args.empty()) return s;
    s += '(';
    for (std::size_t i = 0; i < f->args.size(); ++i) {
        if (i) s += ", ";
        s += render_call(f->args[i]);
    }
    return s + ')';
}

/// Replace placeholder propositions by the corresponding arguments.
inline Formula instantiate(Formula tmpl, const std::vector<std::string>& vars, const std::vector<Formula>& args) {
    if (tmpl->is_prop()) {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == tmpl->name) return args[i];
        return tmpl;
    }
    std::vector<Formula> a;
    for (auto x : tmpl->args) a.push_back(instantiate(x, vars, args));
    if (tmpl->is_apply()) return apply(tmpl->table, a);
    return quant(tmpl->q, tmpl->op, a[0], a.size() > 1 ? a[1] : nullptr, tmpl->tag);
}

inline constexpr std::size_t kShortRepBudget = 2000;

namespace clone_detail {

struct Entry {
    Formula expr;
    std::string text;
};

/// Keep e for its function unless an earlier or lexicographically smaller
/// entry of the same size is already known.
inline bool offer(std::map<std::uint32_t, Entry>& best, std::map<std::uint32_t, int>& size_of,
                  std::uint32_t m, int size, Formula e) {
    auto it = best.find(m);
    std::string text = render_call(e);
    if (it == best.end()) {
        best.emplace(m, Entry{e, std::move(text)});
        size_of[m] = size;
        return true;
    }
    if (size_of[m] == size && text < it->second.text) it->second = Entry{e, std::move(text)};
    return false;
}

} // namespace clone_detail

/// Read-once representation of f over base: every argument of f occurs
/// exactly once and in its original order; constants of the base may be used
/// freely.  Iterative deepening by node count, at most `budget` candidates.
inline std::optional<Representation> short_representation(const Base& base, const TruthTable& f,
                                                          std::size_t budget = kShortRepBudget) {
    using namespace clone_detail;
    const int n = f.arity;
    if (n > 5) throw Error("cap", "short_representation supports arity at most 5");
    const auto vars = placeholder_names(n);
    const std::uint32_t target = pack(f);
    const auto fns = base.functions();

    // per contiguous variable range [lo, hi): functions reached so far
    using Key = std::pair<int, int>;
    std::map<Key, std::map<std::uint32_t, Entry>> best;
    std::map<Key, std::map<std::uint32_t, int>> size_of;
    std::map<std::pair<int, Key>, std::vector<std::uint32_t>> by_size;
    std::size_t candidates = 0;
    bool exhausted = false;

    auto var_mask = [&](int i) { return projection(n, i); };
    const std::uint32_t full = n == 5 ? ~0u : ((std::uint32_t(1) << (1u << n)) - 1);

    int max_arity = 1, last_new = 1;
    for (auto& g : fns) max_arity = std::max(max_arity, g.arity);
    // no expression of size s > max_arity * last_new + 1 has only new children
    for (int s = 1; !exhausted && s <= max_arity * last_new + 1; ++s) {
        std::map<Key, std::vector<std::pair<std::uint32_t, Formula>>> fresh;
        for (int lo = 0; lo <= n && !exhausted; ++lo)
            for (int hi = lo; hi <= n && !exhausted; ++hi) {
                Key key{lo, hi};
                auto emit = [&](std::uint32_t m, Formula e) {
                    if (++candidates > budget) {
                        exhausted = true;
                        return;
                    }
                    fresh[key].push_back({m & full, e});
                };
                if (s == 1) {
                    if (hi == lo + 1) emit(var_mask(lo), prop(vars[lo]));
                    if (hi == lo)
                        for (auto& g : fns)
                            if (g.arity == 0) emit(g.at(0) ? full : 0u, apply(g, {}));
                    continue;
                }
                for (auto& g : fns) {
                    const int a = g.arity;
                    if (a == 0 || a > s - 1 || exhausted) continue;
                    std::vector<int> sizes(a), cuts(a + 1);
                    std::vector<std::uint32_t> ms(a);
                    std::vector<Formula> es(a);
                    // choose child sizes, range cuts, then child functions
                    std::function<void(int, int, int)> child = [&](int j, int left, int from) {
                        if (exhausted) return;
                        if (j == a) {
                            if (left != 0 || from != hi) return;
                            std::function<void(int)> pick = [&](int c) {
                                if (exhausted) return;
                                if (c == a) {
                                    emit(compose(g, ms, n), apply(g, es));
                                    return;
                                }
                                Key ck{cuts[c], cuts[c + 1]};
                                auto it = by_size.find({sizes[c], ck});
                                if (it == by_size.end()) return;
                                for (auto m : it->second) {
                                    ms[c] = m;
                                    es[c] = best[ck][m].expr;
                                    pick(c + 1);
                                    if (exhausted) return;
                                }
                            };
                            pick(0);
                            return;
                        }
                        const bool last = j == a - 1;
                        for (int sz = last ? left : 1; sz <= left - (a - 1 - j); ++sz)
                            for (int cut = last ? hi : from; cut <= hi; ++cut) {
                                if (!by_size.count({sz, Key{from, cut}})) continue;
                                sizes[j] = sz;
                                cuts[j] = from;
                                cuts[j + 1] = cut;
                                child(j + 1, left - sz, cut);
                                if (exhausted) return;
                            }
                    };
                    child(0, s - 1, lo);
                }
            }
        for (auto& [key, list] : fresh)
            for (auto& [m, e] : list)
                if (offer(best[key], size_of[key], m, s, e)) {
                    by_size[{s, key}].push_back(m);
                    last_new = s;
                }
        auto& whole = best[{0, n}];
        auto it = whole.find(target);
        if (it != whole.end()) {
            Representation r;
            r.expr = it->second.expr;
            r.vars = vars;
            r.nodes = formula_size(r.expr);
            r.candidates = candidates;
            return r;
        }
    }
    return std::nullopt;
}

/// Smallest representation of f over base with unrestricted reuse of
/// arguments; ties broken by lexicographic function-call rendering.
inline std::optional<Representation> smallest_representation(const Base& base, const TruthTable& f,
                                                             int max_nodes = 32) {
    using namespace clone_detail;
    const int n = f.arity;
    if (n > 5) throw Error("cap", "smallest_representation supports arity at most 5");
    const auto vars = placeholder_names(n);
    const std::uint32_t target = pack(f);
    const std::uint32_t full = n == 5 ? ~0u : ((std::uint32_t(1) << (1u << n)) - 1);
    const auto fns = base.functions();
    std::map<std::uint32_t, Entry> best;
    std::map<std::uint32_t, int> size_of;
    std::map<int, std::vector<std::uint32_t>> by_size;
    std::size_t candidates = 0;
    for (int s = 1; s <= max_nodes; ++s) {
        std::vector<std::pair<std::uint32_t, Formula>> fresh;
        if (s == 1) {
            for (int i = 0; i < n; ++i) fresh.push_back({projection(n, i), prop(vars[i])});
            for (auto& g : fns)
                if (g.arity == 0) fresh.push_back({g.at(0) ? full : 0u, apply(g, {})});
        }
        for (auto& g : fns) {
            const int a = g.arity;
            if (a == 0 || a > s - 1) continue;
            std::vector<int> sizes(a);
            std::vector<std::uint32_t> ms(a);
            std::vector<Formula> es(a);
            std::function<void(int, int)> child = [&](int j, int left) {
                if (j == a) {
                    if (left != 0) return;
                    std::function<void(int)> pick = [&](int c) {
                        if (c == a) {
                            ++candidates;
                            fresh.push_back({compose(g, ms, n) & full, apply(g, es)});
                            return;
                        }
                        for (auto m : by_size[sizes[c]]) {
                            ms[c] = m;
                            es[c] = best[m].expr;
                            pick(c + 1);
                        }
                    };
                    pick(0);
                    return;
                }
                for (int sz = j == a - 1 ? left : 1; sz <= left - (a - 1 - j); ++sz) {
                    if (!by_size.count(sz)) continue;
                    sizes[j] = sz;
                    child(j + 1, left - sz);
                }
            };
            child(0, s - 1);
        }
        for (auto& [m, e] : fresh)
            if (offer(best, size_of, m, s, e)) by_size[s].push_back(m);
        auto it = best.find(target);
        if (it != best.end()) {
            Representation r;
            r.expr = it->second.expr;
            r.vars = vars;
            r.nodes = formula_size(r.expr);
            r.candidates = candidates;
            return r;
        }
        if (best.size() == (std::size_t(1) << (1u << n))) break;
    }
    return std::nullopt;
}

// ── Base translation ────────────────────────────────────────────────────────

/// Replace every Boolean function by its short representation over target.
inline Formula base_translate(Formula f, const Base& target, std::size_t budget = kShortRepBudget) {
    for (auto* t : {&tables::and2(), &tables::or2(), &tables::not1()})
        if (!clone_generates(target, *t))
            throw Error("incomplete", "target base does not generate '" + t->name + "'");
    std::map<TruthTable, Representation> reps;
    std::function<Formula(Formula)> go = [&](Formula g) -> Formula {
        if (g->is_prop()) return g;
        std::vector<Formula> args;
        for (auto a : g->args) args.push_back(go(a));
        if (g->is_quant()) return quant(g->q, g->op, args[0], args.size() > 1 ? args[1] : nullptr, g->tag);
        auto it = reps.find(g->table);
        if (it == reps.end()) {
            auto r = short_representation(target, g->table, budget);
            if (!r) throw Error("incomplete", "no short representation of '" + g->name + "' within budget");
            it = reps.emplace(g->table, *r).first;
        }
        return instantiate(it->second.expr, it->second.vars, args);
    };
    return go(f);
}

// ── Pseudo-monotonicity and ⊤ removal ───────────────────────────────────────

namespace clone_detail {

/// φ viewed as a Boolean function of its propositions and top-level temporal
/// subformulas: is it monotone in each temporal one?
inline bool monotone_in_temporal_atoms(Formula phi) {
    auto atoms = top_temporal_atoms(phi);
    if (atoms.empty()) return true;
    std::map<Formula, int> var;
    for (auto g : subformulas(phi))
        if (g->is_prop()) var.emplace(g, int(var.size()));
    for (auto a : atoms) var.emplace(a, int(var.size()));
    BddManager mgr(int(var.size()));
    std::map<Formula, BddManager::Ref> memo;
    std::function<BddManager::Ref(Formula)> build = [&](Formula g) -> BddManager::Ref {
        if (!g->is_apply()) return mgr.var(var.at(g));
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
        std::vector<BddManager::Ref> a;
        for (auto x : g->args) a.push_back(build(x));
        BddManager::Ref r = BddManager::False;
        const int k = g->table.arity;
        for (std::size_t row = 0; row < (std::size_t(1) << k); ++row) {
            if (!g->table.at(row)) continue;
            BddManager::Ref term = BddManager::True;
            for (int i = 0; i < k; ++i)
                term = mgr.land(term, ((row >> (k - 1 - i)) & 1u) ? a[i] : mgr.lnot(a[i]));
            r = mgr.lor(r, term);
        }
        memo.emplace(g, r);
        return r;
    };
    auto root = build(phi);
    for (auto a : atoms) {
        int v = var.at(a);
        auto lo = mgr.restrict_var(root, v, false), hi = mgr.restrict_var(root, v, true);
        if (mgr.limp(lo, hi) != BddManager::True) return false;
    }
    return true;
}

inline bool is_top_constant(const TruthTable& t) { return t.arity == 0 && t.at(0); }

} // namespace clone_detail

/// φ and every temporal argument are monotone in their temporal atoms.
inline bool is_pseudo_monotone(Formula f) {
    if (!clone_detail::monotone_in_temporal_atoms(f)) return false;
    for (auto g : subformulas(f))
        if (g->is_quant())
            for (auto a : g->args)
                if (!clone_detail::monotone_in_temporal_atoms(a)) return false;
    return true;
}

inline Base without_top(const Base& b) {
    Base out;
    for (auto& t : b.functions())
        if (!clone_detail::is_top_constant(t)) out.add(t);
    return out;
}

/// Replace ⊤ by the fresh proposition and guard every temporal argument and
/// the whole formula with a conjunction with it.
inline Formula remove_top(Formula f, const Base& base, const std::string& fresh) {
    auto t = prop(fresh);
    for (auto& p : propositions(f))
        if (p == fresh) throw Error("fresh", "proposition '" + fresh + "' already occurs in the formula");
    if (!is_pseudo_monotone(f)) throw Error("not-pseudo-monotone", "formula is not pseudo-monotone: " + render(f));
    auto rep = smallest_representation(without_top(base), tables::and2());
    if (!rep) throw Error("incomplete", "conjunction is not expressible without the constant true");
    auto guard = [&](Formula x) { return instantiate(rep->expr, rep->vars, {x, t}); };
    std::function<Formula(Formula)> go = [&](Formula g) -> Formula {
        if (g->is_prop()) return g;
        if (g->is_apply() && clone_detail::is_top_constant(g->table)) return t;
        std::vector<Formula> args;
        for (auto a : g->args) args.push_back(go(a));
        if (g->is_apply()) return apply(g->table, args);
        return quant(g->q, g->op, guard(args[0]), args.size() > 1 ? guard(args[1]) : nullptr, g->tag);
    };
    return guard(go(f));
}

/// First of base, base1, base2, ... not occurring in f.
inline std::string fresh_proposition(Formula f, const std::string& base = "t") {
    auto props = propositions(f);
    std::set<std::string> used(props.begin(), props.end());
    if (!used.count(base)) return base;
    for (int i = 1;; ++i)
        if (!used.count(base + std::to_string(i))) return base + std::to_string(i);
}

/// Negation normal form, translation into target plus ⊤, then ⊤ removal.
inline Formula s1_transform(Formula f, const Base& target) {
    if (!clone_generates(target, tables::nimpl2()))
        throw Error("not-s1", "target base does not generate negated implication");
    Base ext = target;
    bool has_top = false;
    for (auto& t : target.functions()) has_top = has_top || clone_detail::is_top_constant(t);
    if (!has_top) ext.add(target.find("top") ? TruthTable("top_", 0, {1}) : tables::top0());
    auto translated = base_translate(to_nnf(f), ext);
    return remove_top(translated, ext, fresh_proposition(f));
}

// ── Translation into depth two with AG ──────────────────────────────────────

/// Name x__<hex FNV-1a of the rendering>.
inline std::string ag_proposition_name(Formula alpha) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : render(alpha)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream s;
    s << "x__" << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

/// x_φ ∧ AG ξ where ξ forces each x_α to agree with its subformula α.
inline Formula ag_translate(Formula f) {
    Formula g = strip_tags(f);
    auto sf = subformulas(g);
    std::map<Formula, Formula, FormulaLess> x;
    std::set<std::string> names;
    for (auto a : sf) {
        auto name = ag_proposition_name(a);
        if (!names.insert(name).second) throw std::logic_error("fresh name collision in ag_translate");
        x.emplace(a, prop(name));
    }
    for (auto& p : propositions(g))
        if (names.count(p)) throw std::logic_error("fresh name collides with an input proposition");
    std::vector<Formula> xi;
    for (auto a : sf) {
        Formula rhs;
        if (a->is_prop()) {
            rhs = a;
        } else if (a->is_quant()) {
            rhs = quant(a->q, a->op, x.at(a->args[0]), a->args.size() > 1 ? x.at(a->args[1]) : nullptr);
        } else {
            const int k = a->table.arity;
            std::vector<Formula> rows;
            for (std::size_t row = 0; row < (std::size_t(1) << k); ++row) {
                if (!a->table.at(row)) continue;
                std::vector<Formula> lits;
                for (int i = 0; i < k; ++i) {
                    Formula xb = x.at(a->args[i]);
                    lits.push_back(((row >> (k - 1 - i)) & 1u) ? xb : lnot(xb));
                }
                rows.push_back(conj(lits));
            }
            rhs = disj(rows);
        }
        xi.push_back(liff(x.at(a), rhs));
    }
    return land(x.at(g), AG(conj(xi)));
}

} // namespace ctlf

#endif // CTLF_CLONES_HPP
