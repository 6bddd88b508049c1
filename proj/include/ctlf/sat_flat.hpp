// ============================================================================
// ctlf/sat_flat.hpp: satisfiability and model shrinking for flat CTL
// ============================================================================
//
// A flat formula is a Boolean combination of propositions and temporal
// formulas with propositional arguments.  Fixing the truth of each temporal
// atom turns it into a set of existential literals (each needs one witness
// path) and universal literals (every path).  Models are searched in the
// shape root + one disjoint lasso branch per existential literal; each
// branch is checked on the single path it contributes.
//
// ============================================================================

#ifndef CTLF_SAT_FLAT_HPP
#define CTLF_SAT_FLAT_HPP

#include "ctlf/sat_common.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace ctlf {

struct FlatOptions {
    Budget budget = Budget::from_env();
    int max_props = 12;
};

namespace flat_detail {

/// A temporal literal with propositional arguments, evaluated on label masks.
struct PathLit {
    Formula g;
    std::vector<char> a, b;   // argument truth per label mask

    bool existential() const { return g->q == PathQ::E; }
};

inline bool prop_true(Formula arg, unsigned mask, const std::vector<std::string>& props) {
    return eval_skeleton(arg, [&](Formula leaf) {
        if (!leaf->is_prop()) throw Error("fragment", "temporal depth above 1");
        auto it = std::lower_bound(props.begin(), props.end(), leaf->name);
        return it != props.end() && *it == leaf->name && ((mask >> (it - props.begin())) & 1u);
    });
}

inline PathLit make_lit(Formula g, const std::vector<std::string>& props) {
    PathLit l{g, {}, {}};
    unsigned n = 1u << props.size();
    for (unsigned m = 0; m < n; ++m) {
        l.a.push_back(prop_true(g->args[0], m, props));
        if (g->args.size() > 1) l.b.push_back(prop_true(g->args[1], m, props));
    }
    return l;
}

/// Truth of a path formula with propositional arguments on a lasso whose
/// first-visit order is seq.  Every position is visited once before any
/// repetition, so the loop target is irrelevant and until/release reduce to a
/// linear scan.  Branches are therefore built as chains ending in a self-loop.
inline bool holds_on_lasso(const PathLit& l, const std::vector<unsigned>& seq) {
    const std::size_t n = seq.size();
    switch (l.g->op) {
        case TOp::X: return l.a[seq[1 % n]];
        case TOp::F:
            for (auto m : seq) if (l.a[m]) return true;
            return false;
        case TOp::G:
            for (auto m : seq) if (!l.a[m]) return false;
            return true;
        case TOp::U:
            for (auto m : seq) {
                if (l.b[m]) return true;
                if (!l.a[m]) return false;
            }
            return false;
        case TOp::R:
            for (auto m : seq) {
                if (!l.b[m]) return false;
                if (l.a[m]) return true;
            }
            return true;
    }
    return false;
}

/// Prefix check usable before the lasso is complete: false only if no
/// extension can satisfy the literal.
inline bool prefix_viable(const PathLit& l, const std::vector<unsigned>& seq) {
    switch (l.g->op) {
        case TOp::X: return seq.size() < 2 || l.a[seq[1]];
        case TOp::G:
            for (auto m : seq) if (!l.a[m]) return false;
            return true;
        case TOp::U:
            for (auto m : seq) {
                if (l.b[m]) return true;
                if (!l.a[m]) return false;
            }
            return true;
        case TOp::R:
            for (auto m : seq) {
                if (!l.b[m]) return false;
                if (l.a[m]) return true;
            }
            return true;
        case TOp::F: return true;
    }
    return true;
}

struct Branch {
    std::vector<unsigned> labels;   // branch worlds, excluding the root
    int loop = 0;                   // back-edge target of the last world
    bool operator==(const Branch&) const = default;
};

} // namespace flat_detail

class FlatSolver {
public:
    FlatSolver(Formula f, const FlatOptions& opt) : f_(f), opt_(opt), deadline_(opt.budget.millis) {
        if (temporal_depth(f) > 1) throw Error("fragment", "sat_flat requires temporal depth at most 1");
        props_ = propositions(f);
        if (int(props_.size()) > opt.max_props) throw Error("budget", "too many propositions for sat_flat");
        atoms_ = top_temporal_atoms(f);
    }

    SatResult solve() {
        using namespace flat_detail;
        Stopwatch watch;
        SatResult res;
        res.engine = "flat";
        try {
            const int n = int(atoms_.size());
            std::vector<unsigned> order(1u << n);
            std::iota(order.begin(), order.end(), 0u);
            auto e_count = [&](unsigned s) {
                int c = 0;
                for (int i = 0; i < n; ++i)
                    if ((((s >> i) & 1u) != 0) == (atoms_[i]->q == PathQ::E)) ++c;
                return c;
            };
            std::stable_sort(order.begin(), order.end(),
                             [&](unsigned x, unsigned y) { return e_count(x) < e_count(y); });
            for (unsigned sigma : order) {
                deadline_.check();
                if (auto m = try_assignment(sigma)) {
                    if (!model_check(*m, f_)) throw std::logic_error("sat_flat produced a non-model");
                    res.status = SatStatus::Sat;
                    res.witness = std::move(*m);
                    break;
                }
            }
            if (!res.sat()) res.status = SatStatus::Unsat;
        } catch (const BudgetExceeded& e) {
            res.status = SatStatus::Unknown;
            res.reason = e.what();
        }
        res.stats.nodes = tried_;
        res.stats.millis = watch.millis();
        return res;
    }

private:
    using Branch = flat_detail::Branch;
    using PathLit = flat_detail::PathLit;

    Formula f_;
    FlatOptions opt_;
    Deadline deadline_;
    std::vector<std::string> props_;
    std::vector<Formula> atoms_;
    std::size_t tried_ = 0;

    std::optional<Model> try_assignment(unsigned sigma) {
        using namespace flat_detail;
        std::vector<PathLit> E, A;
        for (std::size_t i = 0; i < atoms_.size(); ++i) {
            Formula lit = ((sigma >> i) & 1u) ? atoms_[i] : dual_formula(atoms_[i]);
            (lit->q == PathQ::E ? E : A).push_back(make_lit(lit, props_));
        }
        const int k = int(A.size());
        for (unsigned root = 0; root < (1u << props_.size()); ++root) {
            bool skel = eval_skeleton(f_, [&](Formula leaf) {
                if (leaf->is_prop()) return prop_true(leaf, root, props_);
                auto it = std::find(atoms_.begin(), atoms_.end(), leaf);
                return ((sigma >> (it - atoms_.begin())) & 1u) != 0;
            });
            if (!skel) continue;
            std::vector<Branch> branches;
            bool ok = true;
            if (E.empty()) {
                auto b = find_branch(root, nullptr, A, k + 2);
                if (!b) ok = false;
                else branches.push_back(*b);
            }
            for (auto& e : E) {
                auto b = find_branch(root, &e, A, k + 2);
                if (!b) {
                    ok = false;
                    break;
                }
                if (std::find(branches.begin(), branches.end(), *b) == branches.end()) branches.push_back(*b);
            }
            if (ok) return build(root, branches);
        }
        return std::nullopt;
    }

    std::optional<Branch> find_branch(unsigned root, const PathLit* e, const std::vector<PathLit>& A, int max_len) {
        using namespace flat_detail;
        const unsigned labels = 1u << props_.size();
        std::vector<unsigned> seq{root};
        for (int len = 1; len <= max_len; ++len) {
            std::optional<Branch> found;
            std::function<bool()> rec = [&]() -> bool {
                if (int(seq.size()) == len + 1) {
                    ++tried_;
                    bool good = true;
                    for (auto& a : A) good = good && holds_on_lasso(a, seq);
                    if (good && e) good = holds_on_lasso(*e, seq);
                    if (good) found = Branch{std::vector<unsigned>(seq.begin() + 1, seq.end()), len - 1};
                    return good;
                }
                for (unsigned m = 0; m < labels; ++m) {
                    seq.push_back(m);
                    bool viable = true;
                    for (auto& a : A) viable = viable && prefix_viable(a, seq);
                    if (viable && e && e->g->op != TOp::F) viable = prefix_viable(*e, seq);
                    if (viable && rec()) return true;
                    seq.pop_back();
                }
                if ((tried_ & 0xFFF) == 0) deadline_.check();
                return false;
            };
            if (rec()) return found;
        }
        return std::nullopt;
    }

    Model build(unsigned root, const std::vector<Branch>& branches) const {
        Model m;
        auto labels_of = [&](unsigned mask) {
            std::set<std::string> s;
            for (std::size_t i = 0; i < props_.size(); ++i)
                if ((mask >> i) & 1u) s.insert(props_[i]);
            return s;
        };
        int r = m.add_world("r", labels_of(root));
        m.root = r;
        int bi = 0;
        for (auto& b : branches) {
            std::vector<int> ws;
            for (std::size_t j = 0; j < b.labels.size(); ++j)
                ws.push_back(m.add_world("b" + std::to_string(bi) + "_" + std::to_string(j), labels_of(b.labels[j])));
            m.add_edge(r, ws[0]);
            for (std::size_t j = 0; j + 1 < ws.size(); ++j) m.add_edge(ws[j], ws[j + 1]);
            m.add_edge(ws.back(), ws[b.loop]);
            ++bi;
        }
        return m;
    }
};

inline SatResult sat_flat(Formula f, const FlatOptions& opt = {}) {
    FlatSolver s(f, opt);
    return s.solve();
}

// ── Shrinking ───────────────────────────────────────────────────────────────

struct ShrinkReport {
    Model model;
    int e_literals = 0;       // m
    int a_literals = 0;       // k
    std::vector<int> branch_lengths;
};

/// Keeps, per branch, only the marked worlds: the first branch world, the
/// first fulfilment point of every universal literal and the witness points
/// of the existential literals assigned to it.  Branches must be chains
/// ending in a self-loop; the last kept world of each branch gets a self-loop.
inline ShrinkReport shrink_flat_model_report(const Model& m, Formula f) {
    using namespace flat_detail;
    if (temporal_depth(f) > 1) throw Error("fragment", "shrink_flat_model requires a flat formula");
    if (!is_serial(m)) throw Error("unvalidated", "model is not serial");
    if (!model_check(m, f)) throw Error("not-a-model", "model does not satisfy the formula");

    // branch form
    std::vector<std::vector<int>> branches;
    std::vector<int> owner(m.size(), -1);
    owner[m.root] = -2;
    for (int start : m.succ[m.root]) {
        std::vector<int> chain;
        int w = start;
        while (true) {
            if (w == m.root || owner[w] != -1)
                throw Error("not-branch-form", "branches must be disjoint chains that avoid the root");
            owner[w] = int(branches.size());
            chain.push_back(w);
            if (m.succ[w].size() != 1) throw Error("not-branch-form", "branch world with several successors");
            int u = m.succ[w][0];
            if (u == w) break;
            w = u;
        }
        branches.push_back(chain);
    }

    auto atoms = top_temporal_atoms(f);
    ModelChecker mc(m);
    std::vector<Formula> E, A;
    for (auto g : atoms) {
        Formula lit = mc.truth(g)[m.root] ? g : dual_formula(g);
        (lit->q == PathQ::E ? E : A).push_back(lit);
    }

    // the path root, chain... as world indices
    auto path_of = [&](const std::vector<int>& chain) {
        std::vector<int> p{m.root};
        p.insert(p.end(), chain.begin(), chain.end());
        return p;
    };
    auto truth_at = [&](Formula g, int w) { return mc.truth(g)[w] != 0; };
    // first position on the path at which the literal is settled, -1 if it never is
    auto settle_point = [&](Formula lit, const std::vector<int>& p) -> int {
        switch (lit->op) {
            case TOp::X: return 1;
            case TOp::F:
                for (std::size_t i = 0; i < p.size(); ++i) if (truth_at(lit->args[0], p[i])) return int(i);
                return -1;
            case TOp::G: return -1;
            case TOp::U:
                for (std::size_t i = 0; i < p.size(); ++i) if (truth_at(lit->args[1], p[i])) return int(i);
                return -1;
            case TOp::R:
                for (std::size_t i = 0; i < p.size(); ++i) if (truth_at(lit->args[0], p[i])) return int(i);
                return -1;
        }
        return -1;
    };
    auto witnessed_by = [&](Formula lit, const std::vector<int>& p) {
        // the single path through the chain, with the last world repeating
        Model pm;
        for (std::size_t i = 0; i < p.size(); ++i) pm.add_world("", m.labels[p[i]]);
        for (std::size_t i = 0; i + 1 < p.size(); ++i) pm.add_edge(int(i), int(i + 1));
        pm.add_edge(int(p.size()) - 1, int(p.size()) - 1);
        pm.root = 0;
        return model_check(pm, lit);
    };

    std::vector<std::set<int>> marks(branches.size());
    std::vector<char> keep(branches.size(), 0);
    for (auto e : E) {
        for (std::size_t b = 0; b < branches.size(); ++b) {
            auto p = path_of(branches[b]);
            if (!witnessed_by(e, p)) continue;
            keep[b] = 1;
            int s = settle_point(e, p);
            if (s > 0) marks[b].insert(s);
            break;
        }
    }
    if (std::find(keep.begin(), keep.end(), 1) == keep.end()) keep[0] = 1;

    ShrinkReport rep;
    rep.e_literals = int(E.size());
    rep.a_literals = int(A.size());
    Model out;
    out.root = out.add_world(m.names[m.root], m.labels[m.root]);
    for (std::size_t b = 0; b < branches.size(); ++b) {
        if (!keep[b]) continue;
        auto p = path_of(branches[b]);
        marks[b].insert(1);
        for (auto a : A) {
            int s = settle_point(a, p);
            if (s > 0) marks[b].insert(s);
        }
        std::vector<int> ws;
        for (int pos : marks[b]) ws.push_back(out.add_world(m.names[p[pos]], m.labels[p[pos]]));
        out.add_edge(out.root, ws[0]);
        for (std::size_t j = 0; j + 1 < ws.size(); ++j) out.add_edge(ws[j], ws[j + 1]);
        out.add_edge(ws.back(), ws.back());
        rep.branch_lengths.push_back(int(ws.size()));
    }
    if (!model_check(out, f)) throw std::logic_error("shrunk model no longer satisfies the formula");
    rep.model = std::move(out);
    return rep;
}

inline Model shrink_flat_model(const Model& m, Formula f) { return shrink_flat_model_report(m, f).model; }

// ── Merge partition ─────────────────────────────────────────────────────────

struct MergePartition {
    std::vector<std::vector<int>> blocks;   // indices into the input list
    int m = 0;                              // number of blocks
    int occurrences = 0;                    // total proposition occurrences
    bool bound_holds = false;               // m·log2(m) <= occurrences
};

/// Satisfiability of a propositional formula by truth-table evaluation.
inline bool prop_satisfiable(Formula f) {
    if (temporal_depth(f) > 0) throw Error("fragment", "propositional formula expected");
    auto props = propositions(f);
    if (props.size() > 20) throw Error("budget", "too many propositions for truth-table evaluation");
    for (unsigned mask = 0; mask < (1u << props.size()); ++mask)
        if (flat_detail::prop_true(f, mask, props)) return true;
    return false;
}

/// Greedy coarsening: blocks are merged while some pair has a satisfiable
/// joint conjunction; the result has pairwise contradicting blocks.
inline MergePartition merge_partition(const std::vector<Formula>& fs) {
    for (auto f : fs)
        if (!prop_satisfiable(f)) throw Error("unsatisfiable-input", "input formula is unsatisfiable: " + render(f));
    MergePartition r;
    for (int i = 0; i < int(fs.size()); ++i) r.blocks.push_back({i});
    auto block_conj = [&](const std::vector<int>& b) {
        std::vector<Formula> parts;
        for (int i : b) parts.push_back(fs[i]);
        return conj(parts);
    };
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t a = 0; a < r.blocks.size() && !merged; ++a)
            for (std::size_t b = a + 1; b < r.blocks.size() && !merged; ++b) {
                if (!prop_satisfiable(land(block_conj(r.blocks[a]), block_conj(r.blocks[b])))) continue;
                r.blocks[a].insert(r.blocks[a].end(), r.blocks[b].begin(), r.blocks[b].end());
                r.blocks.erase(r.blocks.begin() + std::ptrdiff_t(b));
                merged = true;
            }
    }
    r.m = int(r.blocks.size());
    for (auto f : fs) r.occurrences += prop_occurrences(f);
    r.bound_holds = r.m * std::log2(double(std::max(1, r.m))) <= r.occurrences + 1e-9;
    return r;
}

} // namespace ctlf

#endif // CTLF_SAT_FLAT_HPP
