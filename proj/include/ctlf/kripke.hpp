// ============================================================================
// ctlf/kripke.hpp: Kripke structures, model checking, extent, quasi-models
// ============================================================================

#ifndef CTLF_KRIPKE_HPP
#define CTLF_KRIPKE_HPP

#include "ctlf/formula.hpp"

#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace ctlf {

// ── Structures ──────────────────────────────────────────────────────────────

/// A rooted Kripke structure.  Worlds are dense indices; names are kept only
/// for rendering and file round trips.
struct Model {
    std::vector<std::string> names;
    std::vector<std::vector<int>> succ;
    std::vector<std::set<std::string>> labels;
    int root = 0;

    int size() const { return int(succ.size()); }

    int add_world(const std::string& name = "", std::set<std::string> props = {}) {
        names.push_back(name.empty() ? "w" + std::to_string(succ.size()) : name);
        succ.emplace_back();
        labels.push_back(std::move(props));
        return int(succ.size()) - 1;
    }
    void add_edge(int a, int b) {
        if (a < 0 || b < 0 || a >= size() || b >= size()) throw Error("structure", "edge endpoint out of range");
        auto& s = succ[a];
        auto it = std::lower_bound(s.begin(), s.end(), b);
        if (it == s.end() || *it != b) s.insert(it, b);
    }
    bool has_edge(int a, int b) const { return std::binary_search(succ[a].begin(), succ[a].end(), b); }
    bool holds(int w, const std::string& p) const { return labels[w].count(p) != 0; }
    std::size_t edge_count() const {
        std::size_t n = 0;
        for (auto& s : succ) n += s.size();
        return n;
    }
    bool operator==(const Model& o) const {
        return succ == o.succ && labels == o.labels && root == o.root;
    }
};

struct StructureDiagnostics {
    std::vector<int> non_serial;
    std::vector<int> unreachable;
    bool valid() const { return non_serial.empty() && unreachable.empty(); }
};

inline std::vector<bool> reachable_from(const Model& m, int from) {
    std::vector<bool> seen(m.size(), false);
    if (from < 0 || from >= m.size()) return seen;
    std::vector<int> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
        int w = stack.back();
        stack.pop_back();
        for (int u : m.succ[w])
            if (!seen[u]) seen[u] = true, stack.push_back(u);
    }
    return seen;
}

inline StructureDiagnostics validate_structure(const Model& m) {
    StructureDiagnostics d;
    if (m.size() == 0) return d;
    auto seen = reachable_from(m, m.root);
    for (int w = 0; w < m.size(); ++w) {
        if (m.succ[w].empty()) d.non_serial.push_back(w);
        if (!seen[w]) d.unreachable.push_back(w);
    }
    return d;
}

inline bool is_serial(const Model& m) {
    for (auto& s : m.succ)
        if (s.empty()) return false;
    return m.size() > 0;
}

inline Model complete_serial(Model m) {
    if (m.size() == 0) throw Error("empty-structure", "structure has no worlds");
    for (int w = 0; w < m.size(); ++w)
        if (m.succ[w].empty()) m.succ[w].push_back(w);
    return m;
}

/// Restrict to the worlds reachable from the root, preserving their order.
inline Model restrict_reachable(const Model& m) {
    auto seen = reachable_from(m, m.root);
    std::vector<int> idx(m.size(), -1);
    Model r;
    for (int w = 0; w < m.size(); ++w)
        if (seen[w]) idx[w] = r.add_world(m.names[w], m.labels[w]);
    for (int w = 0; w < m.size(); ++w)
        if (seen[w])
            for (int u : m.succ[w]) r.add_edge(idx[w], idx[u]);
    r.root = idx[m.root];
    return r;
}

// ── Extent ──────────────────────────────────────────────────────────────────

/// Maximum over all paths from the root of (distinct worlds visited − 1).
inline int extent(const Model& m, int world_cap = 20) {
    if (m.size() == 0) throw Error("empty-structure", "structure has no worlds");
    Model r = restrict_reachable(m);
    int n = r.size();
    if (n > world_cap || n > 63)
        throw Error("extent-cap", "extent search limited to " + std::to_string(world_cap) + " worlds");
    int best = 0;
    std::function<void(int, std::uint64_t, int)> dfs = [&](int w, std::uint64_t vis, int cnt) {
        best = std::max(best, cnt - 1);
        if (best == n - 1) return;
        for (int u : r.succ[w])
            if (!((vis >> u) & 1)) dfs(u, vis | (std::uint64_t(1) << u), cnt + 1);
    };
    dfs(r.root, std::uint64_t(1) << r.root, 1);
    return best;
}

// ── Model checking ──────────────────────────────────────────────────────────

/// Bottom-up labeling checker; truth sets are memoized per subformula.
class ModelChecker {
public:
    explicit ModelChecker(const Model& m) : m_(m) {
        if (!is_serial(m)) throw Error("unvalidated", "model checking requires a serial structure");
        pred_.resize(m.size());
        for (int w = 0; w < m.size(); ++w)
            for (int u : m.succ[w]) pred_[u].push_back(w);
    }

    const std::vector<char>& truth(Formula f) {
        auto it = memo_.find(f);
        if (it != memo_.end()) return it->second;
        std::vector<char> r = compute(f);
        return memo_.emplace(f, std::move(r)).first->second;
    }

    bool holds(Formula f, int w) { return truth(f)[w] != 0; }
    bool holds_at_root(Formula f) { return holds(f, m_.root); }

private:
    const Model& m_;
    std::vector<std::vector<int>> pred_;
    std::unordered_map<Formula, std::vector<char>> memo_;

    std::vector<char> ex(const std::vector<char>& a) const {
        std::vector<char> r(m_.size(), 0);
        for (int w = 0; w < m_.size(); ++w)
            for (int u : m_.succ[w])
                if (a[u]) { r[w] = 1; break; }
        return r;
    }
    std::vector<char> ax(const std::vector<char>& a) const {
        std::vector<char> r(m_.size(), 1);
        for (int w = 0; w < m_.size(); ++w)
            for (int u : m_.succ[w])
                if (!a[u]) { r[w] = 0; break; }
        return r;
    }
    // E[a U b]: backward reachability.
    std::vector<char> eu(const std::vector<char>& a, const std::vector<char>& b) const {
        std::vector<char> r = b;
        std::vector<int> work;
        for (int w = 0; w < m_.size(); ++w)
            if (r[w]) work.push_back(w);
        while (!work.empty()) {
            int u = work.back();
            work.pop_back();
            for (int w : pred_[u])
                if (!r[w] && a[w]) r[w] = 1, work.push_back(w);
        }
        return r;
    }
    // A[a U b]: counting successors still lacking the property.
    std::vector<char> au(const std::vector<char>& a, const std::vector<char>& b) const {
        std::vector<char> r = b;
        std::vector<int> missing(m_.size());
        std::vector<int> work;
        for (int w = 0; w < m_.size(); ++w) {
            missing[w] = int(m_.succ[w].size());
            if (r[w]) work.push_back(w);
        }
        while (!work.empty()) {
            int u = work.back();
            work.pop_back();
            for (int w : pred_[u]) {
                if (r[w]) continue;
                if (--missing[w] == 0 && a[w]) r[w] = 1, work.push_back(w);
            }
        }
        return r;
    }
    static std::vector<char> neg(std::vector<char> a) {
        for (auto& x : a) x = !x;
        return a;
    }

    std::vector<char> compute(Formula f) {
        int n = m_.size();
        switch (f->kind) {
            case Kind::Prop: {
                std::vector<char> r(n);
                for (int w = 0; w < n; ++w) r[w] = m_.holds(w, f->name);
                return r;
            }
            case Kind::Apply: {
                std::vector<const std::vector<char>*> args;
                for (auto a : f->args) args.push_back(&truth(a));
                std::vector<char> r(n);
                for (int w = 0; w < n; ++w) {
                    std::size_t idx = 0;
                    for (auto* a : args) idx = (idx << 1) | ((*a)[w] ? 1u : 0u);
                    r[w] = f->table.at(idx);
                }
                return r;
            }
            case Kind::Quant: {
                const auto& a = truth(f->args[0]);
                bool e = f->q == PathQ::E;
                switch (f->op) {
                    case TOp::X: return e ? ex(a) : ax(a);
                    case TOp::F: {
                        std::vector<char> all(n, 1);
                        return e ? eu(all, a) : au(all, a);
                    }
                    case TOp::G: {
                        // EG a = ¬A[⊤ U ¬a], AG a = ¬E[⊤ U ¬a]
                        std::vector<char> all(n, 1);
                        return e ? neg(au(all, neg(a))) : neg(eu(all, neg(a)));
                    }
                    case TOp::U: {
                        std::vector<char> b = truth(f->args[1]);
                        return e ? eu(a, b) : au(a, b);
                    }
                    case TOp::R: {
                        // Q[a R b] = ¬Q̄[¬a U ¬b]
                        std::vector<char> b = truth(f->args[1]);
                        return e ? neg(au(neg(a), neg(b))) : neg(eu(neg(a), neg(b)));
                    }
                }
            }
        }
        return {};
    }
};

inline bool model_check(const Model& m, Formula f) {
    ModelChecker mc(m);
    return mc.holds_at_root(f);
}

inline std::vector<char> truth_set(const Model& m, Formula f) {
    ModelChecker mc(m);
    return mc.truth(f);
}

// ── Tree unraveling ─────────────────────────────────────────────────────────

/// Depth-bounded unraveling; prefixes of length depth+1 become self-loop leaves.
inline Model tree_unravel(const Model& m, int depth) {
    if (depth < 0) throw Error("depth", "unraveling depth must be non-negative");
    Model t;
    struct Item { int orig; int node; int len; };
    std::deque<Item> queue;
    int r = t.add_world(m.names[m.root], m.labels[m.root]);
    t.root = r;
    queue.push_back({m.root, r, 1});
    while (!queue.empty()) {
        Item it = queue.front();
        queue.pop_front();
        if (it.len == depth + 1) {
            t.add_edge(it.node, it.node);
            continue;
        }
        for (int u : m.succ[it.orig]) {
            int c = t.add_world(t.names[it.node] + "." + m.names[u], m.labels[u]);
            t.add_edge(it.node, c);
            queue.push_back({u, c, it.len + 1});
        }
    }
    return t;
}

// ── File formats ────────────────────────────────────────────────────────────

inline Model parse_structure(const std::string& text) {
    Model m;
    std::map<std::string, int> idx;
    std::vector<std::pair<std::string, std::string>> edges;
    std::string root;
    int roots = 0;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "world") {
            std::string name, p;
            if (!(ls >> name)) throw Error("structure", "line " + std::to_string(lineno) + ": world needs a name");
            if (idx.count(name)) throw Error("structure", "duplicate world '" + name + "'");
            std::set<std::string> props;
            while (ls >> p) {
                if (!valid_identifier(p)) throw Error("structure", "invalid proposition '" + p + "'");
                props.insert(p);
            }
            idx[name] = m.add_world(name, props);
        } else if (kw == "edge") {
            std::string a, b;
            if (!(ls >> a >> b)) throw Error("structure", "line " + std::to_string(lineno) + ": edge needs two worlds");
            edges.emplace_back(a, b);
        } else if (kw == "root") {
            if (!(ls >> root)) throw Error("structure", "line " + std::to_string(lineno) + ": root needs a world");
            ++roots;
        } else {
            throw Error("structure", "line " + std::to_string(lineno) + ": unknown keyword '" + kw + "'");
        }
    }
    if (roots != 1) throw Error("structure", "exactly one root line required");
    for (auto& [a, b] : edges) {
        if (!idx.count(a) || !idx.count(b)) throw Error("structure", "edge references unknown world");
        m.add_edge(idx[a], idx[b]);
    }
    if (!idx.count(root)) throw Error("structure", "root references unknown world");
    m.root = idx[root];
    return m;
}

inline std::string write_structure(const Model& m) {
    std::ostringstream out;
    for (int w = 0; w < m.size(); ++w) {
        out << "world " << m.names[w];
        for (auto& p : m.labels[w]) out << ' ' << p;
        out << '\n';
    }
    for (int w = 0; w < m.size(); ++w)
        for (int u : m.succ[w]) out << "edge " << m.names[w] << ' ' << m.names[u] << '\n';
    out << "root " << m.names[m.root] << '\n';
    return out.str();
}

inline std::string to_dot(const Model& m) {
    std::ostringstream out;
    out << "digraph model {\n";
    for (int w = 0; w < m.size(); ++w) {
        out << "  n" << w << " [label=\"" << m.names[w];
        if (!m.labels[w].empty()) {
            out << "\\n";
            bool first = true;
            for (auto& p : m.labels[w]) out << (first ? "" : ",") << p, first = false;
        }
        out << "\"" << (w == m.root ? ", shape=doublecircle" : "") << "];\n";
    }
    for (int w = 0; w < m.size(); ++w)
        for (int u : m.succ[w]) out << "  n" << w << " -> n" << u << ";\n";
    out << "}\n";
    return out.str();
}

// ── Quasi-models ────────────────────────────────────────────────────────────

struct QuasiModel {
    std::vector<std::string> names;
    std::vector<std::vector<int>> succ;
    std::map<Formula, std::vector<bool>, FormulaLess> labeling;

    int size() const { return int(succ.size()); }
    bool labeled(Formula f, int w) const {
        auto it = labeling.find(f);
        return it != labeling.end() && it->second[w];
    }
    std::vector<bool> label_set(Formula f) const {
        auto it = labeling.find(f);
        return it == labeling.end() ? std::vector<bool>(size(), false) : it->second;
    }
};

inline QuasiModel quasi_from_model(const Model& m, Formula f) {
    ModelChecker mc(m);
    if (!mc.holds_at_root(f)) throw Error("root-falsifies", "model does not satisfy " + render(f));
    QuasiModel q;
    q.names = m.names;
    q.succ = m.succ;
    for (auto g : closure(f)) {
        const auto& t = mc.truth(g);
        q.labeling[g] = std::vector<bool>(t.begin(), t.end());
    }
    return q;
}

namespace detail {

// Semantic sets of path conditions evaluated over label sets.
inline std::vector<bool> quasi_path_set(const QuasiModel& q, PathQ pq, TOp op,
                                        const std::vector<bool>& a, const std::vector<bool>& b) {
    Model frame;
    for (int w = 0; w < q.size(); ++w) frame.add_world();
    frame.succ = q.succ;
    for (int w = 0; w < q.size(); ++w) {
        if (a[w]) frame.labels[w].insert("a");
        if (b[w]) frame.labels[w].insert("b");
    }
    Formula A = prop("a"), B = prop("b");
    Formula g = is_binary(op) ? quant(pq, op, A, B) : quant(pq, op, A);
    auto t = truth_set(frame, g);
    return {t.begin(), t.end()};
}

} // namespace detail

/// Checks the quasi-label conditions; returns one message per violation.
inline std::vector<std::string> quasi_check(const QuasiModel& q, Formula f, bool with_q7 = false) {
    std::vector<std::string> diags;
    int n = q.size();
    for (int w = 0; w < n; ++w)
        if (q.succ[w].empty()) diags.push_back("seriality: world " + q.names[w] + " has no successor");
    if (!diags.empty()) return diags;
    FormulaSet cl = closure(f);
    for (auto& [g, _] : q.labeling)
        if (!cl.count(g)) diags.push_back("label outside closure: " + render(g));
    auto name = [&](int w) { return q.names.empty() ? std::to_string(w) : q.names[w]; };
    for (auto g : cl) {
        auto Lg = q.label_set(g);
        auto Ln = q.label_set(negate_syntactic(g));
        for (int w = 0; w < n; ++w) {
            // Q2
            if (Lg[w] && Ln[w]) diags.push_back("Q2: " + render(g) + " and its negation at " + name(w));
        }
        if (g->is_apply()) {
            // Q1 for both polarities
            for (int pol = 1; pol >= 0; --pol) {
                const auto& L = pol ? Lg : Ln;
                for (int w = 0; w < n; ++w) {
                    if (!L[w]) continue;
                    bool found = false;
                    for (std::size_t idx = 0; idx < g->table.out.size() && !found; ++idx) {
                        if (g->table.at(idx) != bool(pol)) continue;
                        bool ok = true;
                        for (int i = 0; i < g->table.arity && ok; ++i) {
                            bool bi = (idx >> (g->table.arity - 1 - i)) & 1;
                            Formula arg = g->args[i];
                            ok = bi ? q.labeled(arg, w) : q.labeled(negate_syntactic(arg), w);
                        }
                        found = ok;
                    }
                    if (!found)
                        diags.push_back(std::string("Q1: no witness vector for ") + (pol ? "" : "~") + render(g) +
                                        " at " + name(w));
                }
            }
        }
        if (g->is_quant()) {
            // Q3/Q4: ¬QOψ forces the dual
            Formula d = dual_formula(g);
            auto Ld = q.label_set(d);
            for (int w = 0; w < n; ++w)
                if (Ln[w] && !Ld[w])
                    diags.push_back("Q3/Q4: " + render(negate_syntactic(g)) + " without " + render(d) + " at " + name(w));
            // Q5
            auto a = q.label_set(g->args[0]);
            auto b = is_binary(g->op) ? q.label_set(g->args[1]) : std::vector<bool>(n, false);
            auto sem = detail::quasi_path_set(q, g->q, g->op, a, b);
            for (int w = 0; w < n; ++w)
                if (Lg[w] && !sem[w]) diags.push_back("Q5: path condition of " + render(g) + " fails at " + name(w));
        }
    }
    // Q6
    bool any = false;
    for (int w = 0; w < n; ++w) any = any || q.labeled(f, w);
    if (!any) diags.push_back("Q6: target formula is labeled nowhere");
    if (with_q7) {
        for (auto g : cl) {
            if (!(g->is_quant() && g->q == PathQ::A && g->op == TOp::F)) continue;
            Formula psi = g->args[0];
            FormulaSet sub = closure(psi);
            for (int w = 0; w < n; ++w) {
                if (!q.labeled(g, w) || q.labeled(psi, w)) continue;
                for (int u : q.succ[w])
                    if (!q.labeled(psi, u) && !q.labeled(g, u))
                        diags.push_back("Q7: successor " + name(u) + " of " + name(w) + " drops " + render(g));
                for (auto s : sub)
                    if (temporal_depth(s) > 0 && q.labeled(s, w))
                        diags.push_back("Q7: pending " + render(g) + " but " + render(s) + " labeled at " + name(w));
            }
        }
    }
    return diags;
}

inline Model model_from_quasi(const QuasiModel& q, Formula f) {
    auto diags = quasi_check(q, f, false);
    if (!diags.empty()) throw Error("quasi-check", "quasi-model check failed: " + diags.front());
    Model m;
    for (int w = 0; w < q.size(); ++w) m.add_world(q.names.empty() ? "" : q.names[w]);
    m.succ = q.succ;
    for (auto g : subformulas(f)) {
        if (!g->is_prop()) continue;
        for (int w = 0; w < q.size(); ++w)
            if (q.labeled(g, w)) m.labels[w].insert(g->name);
    }
    for (int w = 0; w < q.size(); ++w)
        if (q.labeled(f, w)) {
            m.root = w;
            break;
        }
    return m;
}

} // namespace ctlf

#endif // CTLF_KRIPKE_HPP
