// ============================================================================
// ctlf/furl.hpp: extent reduction for models of AG/EF formulas
// ============================================================================
//
// The output is the tree of justified successors: each node answers every
// unfulfilled, needed EFξ of its world with one child placed at a reachable
// ξ-world carrying the most AG-formulas.  Growing a path stops as soon as a
// justification repeats; the child is replaced by a back edge to the earlier
// node with the same justification.  Paths therefore carry pairwise distinct
// justifications and the extent is bounded by their number.
//
// ============================================================================

#ifndef CTLF_FURL_HPP
#define CTLF_FURL_HPP

#include "ctlf/kripke.hpp"

#include <map>

namespace ctlf {

namespace furl_detail {

enum : int { Pos = 1, Neg = 2 };

inline int arg_polarity(const TruthTable& t, int i) {
    bool up = true, down = true;
    const int n = t.arity;
    for (std::size_t idx = 0; idx < (std::size_t(1) << n); ++idx) {
        std::size_t bit = std::size_t(1) << (n - 1 - i);
        if (idx & bit) continue;
        bool lo = t.at(idx), hi = t.at(idx | bit);
        if (lo && !hi) up = false;
        if (!lo && hi) down = false;
    }
    if (up && down) return 0;
    if (up) return Pos;
    if (down) return Neg;
    return Pos | Neg;
}

inline void polarities(Formula f, int pol, std::map<Formula, int, FormulaLess>& out) {
    int& cur = out[f];
    if ((cur | pol) == cur && cur != 0) return;
    cur |= pol;
    if (f->is_apply()) {
        for (int i = 0; i < int(f->args.size()); ++i) {
            int p = arg_polarity(f->table, i);
            int q = 0;
            if (p & Pos) q |= pol;
            if (p & Neg) q |= ((pol & Pos) ? Neg : 0) | ((pol & Neg) ? Pos : 0);
            if (q) polarities(f->args[i], q, out);
        }
    } else {
        for (auto a : f->args) polarities(a, pol, out);
    }
}

} // namespace furl_detail

/// Arguments ξ of the existential eventualities EFξ that a model of f must
/// witness: EF subformulas occurring positively and the negated arguments of
/// AG subformulas occurring negatively.
inline std::vector<Formula> needed_ef_arguments(Formula f) {
    std::map<Formula, int, FormulaLess> pol;
    furl_detail::polarities(f, furl_detail::Pos, pol);
    FormulaSet out;
    for (auto& [g, p] : pol) {
        if (!g->is_quant()) continue;
        if (g->q == PathQ::E && g->op == TOp::F && (p & furl_detail::Pos)) out.insert(g->args[0]);
        if (g->q == PathQ::A && g->op == TOp::G && (p & furl_detail::Neg)) out.insert(negate_syntactic(g->args[0]));
    }
    return {out.begin(), out.end()};
}

/// Number of eventualities that can justify a world: the bound on output extent.
inline int ef_subformula_count(Formula f) { return int(needed_ef_arguments(f).size()); }

inline Model furl_ag_model(const Model& m, Formula f, std::size_t max_worlds = 200'000) {
    for (auto op : operators_used(f))
        if (op != TOp::G) throw Error("fragment", "furl_ag_model admits only AG/EF");
    if (!is_serial(m)) throw Error("unvalidated", "model is not serial");
    if (!model_check(m, f)) throw Error("not-a-model", "model does not satisfy the formula");

    ModelChecker mc(m);
    const auto xi = needed_ef_arguments(f);
    std::vector<Formula> ag;
    for (auto g : closure(f))
        if (g->is_quant() && g->q == PathQ::A && g->op == TOp::G) ag.push_back(g);
    std::vector<int> gsize(m.size(), 0);
    for (auto g : ag) {
        const auto& t = mc.truth(g);
        for (int w = 0; w < m.size(); ++w) gsize[w] += t[w];
    }
    std::vector<std::vector<bool>> reach(m.size());
    for (int w = 0; w < m.size(); ++w) reach[w] = reachable_from(m, w);

    // best candidate world for (w, ξ): reachable, ξ-labelled, most AG formulas
    auto candidate = [&](int w, std::size_t j) {
        const auto& t = mc.truth(xi[j]);
        int best = -1;
        for (int u = 0; u < m.size(); ++u)
            if (reach[w][u] && t[u] && (best < 0 || gsize[u] > gsize[best])) best = u;
        return best;
    };

    Model out;
    struct Frame { int node; int world; int just; };
    std::vector<Frame> path;
    std::function<void(int, int, int)> grow = [&](int node, int world, int just) {
        path.push_back({node, world, just});
        bool any = false;
        for (std::size_t j = 0; j < xi.size(); ++j) {
            if (!mc.truth(quant(PathQ::E, TOp::F, xi[j]))[world] || mc.truth(xi[j])[world]) continue;
            any = true;
            int target = -1;
            for (std::size_t i = 1; i < path.size(); ++i)
                if (path[i].just == int(j)) target = path[i].node;
            if (target >= 0) {
                out.add_edge(node, target);
                continue;
            }
            int u = candidate(world, j);
            if (out.size() >= int(max_worlds)) throw Error("budget", "furled model exceeds world limit");
            int child = out.add_world(m.names[u] + "." + std::to_string(out.size()), m.labels[u]);
            out.add_edge(node, child);
            grow(child, u, int(j));
        }
        if (!any) out.add_edge(node, node);
        path.pop_back();
    };
    int r = out.add_world(m.names[m.root], m.labels[m.root]);
    out.root = r;
    grow(r, m.root, -1);
    if (!model_check(out, f)) throw std::logic_error("furled model no longer satisfies the formula");
    return out;
}

} // namespace ctlf

#endif // CTLF_FURL_HPP
