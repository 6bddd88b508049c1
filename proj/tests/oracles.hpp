// Independent oracles used by the tests.  None of them calls into the engine
// code paths they check; they share only the formula and model data types.
#pragma once

#include "ctlf/formula.hpp"
#include "ctlf/kripke.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using namespace ctlf;

// ── path semantics on simple lassos ────────────────────────────────────────
//
// A simple lasso from w is a sequence of distinct worlds w = v0 .. vn whose
// last world has an edge back to some vj.  Every path property built from
// X, F, G, U, R over state formulas that holds on some path from w also holds
// on some simple lasso from w, and the negation of such a property is again
// one, so E quantifies over simple lassos and A over all of them.

struct Lasso {
    std::vector<int> worlds;
    int loop = 0;
    int at(std::size_t i) const {
        if (i < worlds.size()) return worlds[i];
        std::size_t cyc = worlds.size() - loop;
        return worlds[loop + (i - loop) % cyc];
    }
};

inline void lassos_from(const Model& m, int w, const std::function<void(const Lasso&)>& visit) {
    Lasso l;
    std::vector<char> on(m.size(), 0);
    std::function<void(int)> go = [&](int v) {
        l.worlds.push_back(v);
        on[v] = 1;
        for (int u : m.succ[v]) {
            if (on[u]) {
                l.loop = int(std::find(l.worlds.begin(), l.worlds.end(), u) - l.worlds.begin());
                visit(l);
            } else {
                go(u);
            }
        }
        on[v] = 0;
        l.worlds.pop_back();
    };
    go(w);
}

class LassoChecker {
public:
    explicit LassoChecker(const Model& m) : m_(m) {}

    bool holds(Formula f, int w) {
        auto key = std::make_pair(f, w);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        bool r = eval(f, w);
        memo_[key] = r;
        return r;
    }

private:
    const Model& m_;
    std::map<std::pair<Formula, int>, bool> memo_;

    bool eval(Formula f, int w) {
        switch (f->kind) {
            case Kind::Prop: return m_.labels[w].count(f->name) > 0;
            case Kind::Apply: {
                std::vector<bool> b;
                for (auto a : f->args) b.push_back(holds(a, w));
                return f->table.eval(b);
            }
            case Kind::Quant: break;
        }
        bool any = false, all = true;
        lassos_from(m_, w, [&](const Lasso& l) {
            bool v = on_path(f, l);
            any = any || v;
            all = all && v;
        });
        return f->q == PathQ::E ? any : all;
    }

    // positions 0 .. horizon-1 cover the prefix and one full cycle
    bool on_path(Formula f, const Lasso& l) {
        const std::size_t horizon = l.worlds.size() + 1;
        auto a = [&](std::size_t i) { return holds(f->args[0], l.at(i)); };
        auto b = [&](std::size_t i) { return holds(f->args[1], l.at(i)); };
        switch (f->op) {
            case TOp::X: return a(1);
            case TOp::F:
                for (std::size_t i = 0; i < horizon; ++i) if (a(i)) return true;
                return false;
            case TOp::G:
                for (std::size_t i = 0; i < horizon; ++i) if (!a(i)) return false;
                return true;
            case TOp::U:
                for (std::size_t i = 0; i < horizon; ++i) {
                    if (b(i)) return true;
                    if (!a(i)) return false;
                }
                return false;
            case TOp::R:
                for (std::size_t i = 0; i < horizon; ++i) {
                    if (!b(i)) return false;
                    if (a(i)) return true;
                }
                return true;
        }
        return false;
    }
};

inline bool lasso_check(const Model& m, Formula f) { return LassoChecker(m).holds(f, m.root); }

// ── explicit structure enumeration ─────────────────────────────────────────

/// Calls visit on every serial structure with exactly k worlds rooted at 0;
/// stops early when visit returns true.
inline bool for_each_structure(int k, const std::vector<std::string>& props,
                               const std::function<bool(const Model&)>& visit) {
    const int P = int(props.size());
    const unsigned long long edges = 1ull << (k * k), labels = 1ull << (k * P);
    for (unsigned long long e = 0; e < edges; ++e) {
        bool serial = true;
        for (int w = 0; w < k && serial; ++w) serial = ((e >> (w * k)) & ((1ull << k) - 1)) != 0;
        if (!serial) continue;
        for (unsigned long long lab = 0; lab < labels; ++lab) {
            Model m;
            for (int w = 0; w < k; ++w) {
                std::set<std::string> ls;
                for (int p = 0; p < P; ++p)
                    if ((lab >> (w * P + p)) & 1) ls.insert(props[p]);
                m.add_world("w" + std::to_string(w), ls);
            }
            for (int w = 0; w < k; ++w)
                for (int u = 0; u < k; ++u)
                    if ((e >> (w * k + u)) & 1) m.add_edge(w, u);
            m.root = 0;
            if (visit(m)) return true;
        }
    }
    return false;
}

/// Smallest k ≤ cap with a k-world model of f (explicit search).
inline std::optional<int> min_size_explicit(Formula f, int cap) {
    auto ps = propositions(f);
    std::vector<std::string> props(ps.begin(), ps.end());
    for (int k = 1; k <= cap; ++k)
        if (for_each_structure(k, props, [&](const Model& m) { return lasso_check(m, f); })) return k;
    return std::nullopt;
}

/// Longest simple path (number of edges) from the root.
inline int extent_explicit(const Model& m) {
    int best = 0;
    lassos_from(m, m.root, [&](const Lasso& l) { best = std::max(best, int(l.worlds.size()) - 1); });
    return best;
}

// ── QBF by expansion ───────────────────────────────────────────────────────

inline bool eval_prop(Formula f, const std::map<std::string, bool>& v) {
    if (f->is_prop()) return v.at(f->name);
    std::vector<bool> b;
    for (auto a : f->args) b.push_back(eval_prop(a, v));
    return f->table.eval(b);
}

inline bool qbf_expand(const std::vector<std::pair<char, std::string>>& prefix, Formula matrix) {
    // build the full expansion as a propositional truth value by iterating
    // over all assignments and folding the quantifiers from the inside out
    const int n = int(prefix.size());
    std::vector<char> layer(std::size_t(1) << n);
    for (std::size_t a = 0; a < layer.size(); ++a) {
        std::map<std::string, bool> v;
        for (int i = 0; i < n; ++i) v[prefix[i].second] = (a >> (n - 1 - i)) & 1;
        layer[a] = eval_prop(matrix, v);
    }
    for (int i = n - 1; i >= 0; --i) {
        std::vector<char> up(layer.size() / 2);
        for (std::size_t a = 0; a < up.size(); ++a)
            up[a] = prefix[i].first == 'A' ? (layer[2 * a] && layer[2 * a + 1])
                                           : (layer[2 * a] || layer[2 * a + 1]);
        layer = std::move(up);
    }
    return layer[0];
}

// ── set partitions ─────────────────────────────────────────────────────────

/// Fewest blocks in a partition of {0..n-1} whose every block is accepted.
inline int min_partition_blocks(int n, const std::function<bool(const std::vector<int>&)>& ok) {
    int best = n + 1;
    std::vector<std::vector<int>> blocks;
    std::function<void(int)> go = [&](int i) {
        if (int(blocks.size()) >= best) return;
        if (i == n) {
            best = int(blocks.size());
            return;
        }
        for (auto& b : blocks) {
            b.push_back(i);
            if (ok(b)) go(i + 1);
            b.pop_back();
        }
        blocks.push_back({i});
        if (ok(blocks.back())) go(i + 1);
        blocks.pop_back();
    };
    go(0);
    return best;
}

} // namespace oracle
