// ============================================================================
// ctlf/sat_balloon.hpp: satisfiability for the {AF, AX} fragment via balloon paths
// ============================================================================
//
// Deterministic realisation of the guess-a-balloon procedure.  A call
//   path(G, F, X, level)
// looks for an ultimately periodic path of quasi-labels starting at a
// successor of the caller: every label contains X (pending AX arguments) on
// its first world, G (an EG argument) on every world, and respects the AF
// fixpoint rule against its predecessor.  Every EGγ / EXξ in a label spawns
// its own sub-balloon one level down.  The guesses of the original procedure
// become breadth-first searches:
//   - label guesses enumerate minimal locally consistent supersets of the
//     forced formulas;
//   - the cycle start L* and the cycle itself are found by a search over
//     (label, fulfilled-eventualities) pairs, closing when an edge back to L*
//     exists and every AF pending at L* was fulfilled inside the cycle.
//
// ============================================================================

#ifndef CTLF_SAT_BALLOON_HPP
#define CTLF_SAT_BALLOON_HPP

#include "ctlf/sat_common.hpp"

#include <deque>
#include <map>

namespace ctlf {

struct BalloonOptions {
    Budget budget = Budget::from_env();
    int cycle_cap = 0;                    // 0: min(2^|closure|, 4096)
    std::size_t max_witness_worlds = 200'000;
};

class BalloonSolver {
public:
    using Label = FormulaSet;

    BalloonSolver(Formula f, const BalloonOptions& opt)
        : orig_(f), f_(tag_occurrences(f)), opt_(opt), deadline_(opt.budget.millis) {
        for (auto op : operators_used(f))
            if (op != TOp::F && op != TOp::X)
                throw Error("fragment", "sat_balloon admits only AF/AX and their duals");
        cl_ = closure(f_);
        cap_ = opt.cycle_cap > 0 ? opt.cycle_cap
                                 : (cl_.size() >= 12 ? 4096 : std::min(4096, 1 << cl_.size()));
    }

    SatResult solve() {
        Stopwatch watch;
        SatResult res;
        res.engine = "balloon";
        try {
            auto root = path({}, {}, Label{f_}, int(cl_.size()));
            if (root) {
                Model m;
                instantiate(*root, -1, m);
                m.root = 0;
                if (!model_check(m, orig_)) throw std::logic_error("sat_balloon produced a non-model");
                res.status = SatStatus::Sat;
                res.witness = std::move(m);
            } else if (truncated_) {
                res.status = SatStatus::Unknown;
                res.reason = "cycle length cap reached";
            } else {
                res.status = SatStatus::Unsat;
            }
        } catch (const BudgetExceeded& e) {
            res.status = SatStatus::Unknown;
            res.reason = e.what();
        }
        res.stats.nodes = explored_;
        res.stats.millis = watch.millis();
        return res;
    }

private:
    struct Path {
        std::vector<int> labels;              // label ids along the path
        int loop = 0;                         // back edge from the last world to labels[loop]
        std::vector<std::vector<int>> kids;   // sub-balloon path ids per world
    };
    struct Key {
        Label g, f, x;
        bool operator<(const Key& o) const {
            return std::tie(g, f, x) < std::tie(o.g, o.f, o.x);
        }
    };
    struct MemoEntry {
        int ok_level = INT_MAX;               // smallest level known to succeed
        int fail_level = -1;                  // largest level known to fail
        int path = -1;
    };

    Formula orig_, f_;
    BalloonOptions opt_;
    Deadline deadline_;
    FormulaSet cl_;
    int cap_;
    bool truncated_ = false;
    std::size_t explored_ = 0;
    std::map<Label, int> label_id_;
    std::vector<Label> labels_;
    std::vector<Path> paths_;
    std::map<Key, MemoEntry> memo_;
    std::map<std::pair<int, int>, std::optional<std::vector<int>>> valid_memo_;
    std::map<std::pair<Label, Label>, std::vector<int>> expand_memo_;
    std::size_t built_worlds_ = 0;

    static bool is_af(Formula g) { return g->is_quant() && g->q == PathQ::A && g->op == TOp::F; }
    static bool is_ax(Formula g) { return g->is_quant() && g->q == PathQ::A && g->op == TOp::X; }

    int intern(const Label& l) {
        auto [it, fresh] = label_id_.emplace(l, int(labels_.size()));
        if (fresh) labels_.push_back(l);
        return it->second;
    }

    Label next_x(const Label& l) const {
        Label x;
        for (auto g : l)
            if (is_ax(g)) x.insert(g->args[0]);
        return x;
    }
    Label pending_af(const Label& l) const {
        Label p;
        for (auto g : l)
            if (is_af(g) && !l.count(g->args[0])) p.insert(g);
        return p;
    }

    // ── local consistency ──

    void saturate(Label l, std::vector<Formula> work, std::vector<Label>& out) {
        auto add = [&](Formula x) -> bool {
            if (l.count(x)) return true;
            if (l.count(negate_syntactic(x))) return false;
            l.insert(x);
            work.push_back(x);
            return true;
        };
        while (!work.empty()) {
            Formula g = work.back();
            work.pop_back();
            if (l.count(negate_syntactic(g))) return;
            const TruthTable* table = nullptr;
            const std::vector<const Node*>* args = nullptr;
            bool want = true;
            if (g->is_apply() && !g->is_not()) {
                table = &g->table;
                args = &g->args;
            } else if (g->is_not()) {
                Formula h = g->args[0];
                if (h->is_apply()) {
                    table = &h->table;
                    args = &h->args;
                    want = false;
                } else if (h->is_quant()) {
                    if (!add(dual_formula(h))) return;
                }
            } else if (g->is_quant() && g->q == PathQ::E && g->op == TOp::G) {
                if (!add(g->args[0])) return;
            }
            if (!table) continue;
            // Q1: choose a full argument vector with the required output
            std::vector<std::vector<Formula>> options;
            const int n = table->arity;
            for (std::size_t idx = 0; idx < (std::size_t(1) << n); ++idx) {
                if (table->at(idx) != want) continue;
                std::vector<Formula> opt;
                bool clash = false;
                for (int i = 0; i < n; ++i) {
                    bool bit = (idx >> (n - 1 - i)) & 1u;
                    Formula x = bit ? (*args)[i] : negate_syntactic((*args)[i]);
                    if (l.count(negate_syntactic(x))) clash = true;
                    opt.push_back(x);
                }
                if (!clash) options.push_back(opt);
            }
            if (options.empty()) return;
            if (options.size() == 1) {
                for (auto x : options[0])
                    if (!add(x)) return;
                continue;
            }
            for (auto& opt : options) {
                Label l2 = l;
                std::vector<Formula> w2 = work;
                bool ok = true;
                for (auto x : opt) {
                    if (l2.count(x)) continue;
                    if (l2.count(negate_syntactic(x))) { ok = false; break; }
                    l2.insert(x);
                    w2.push_back(x);
                }
                if (ok) saturate(l2, w2, out);
            }
            return;
        }
        out.push_back(std::move(l));
    }

    /// Locally consistent labels containing `forced` and, for every pending
    /// AFψ of the predecessor, ψ or AFψ; minimal up to own AF obligations.
    const std::vector<int>& expand(const Label& forced, const Label& pending) {
        auto key = std::make_pair(forced, pending);
        auto it = expand_memo_.find(key);
        if (it != expand_memo_.end()) return it->second;
        deadline_.check();
        std::vector<Formula> pend(pending.begin(), pending.end());
        std::vector<int> ids;
        for (std::size_t choice = 0; choice < (std::size_t(1) << pend.size()); ++choice) {
            Label l;
            std::vector<Formula> work;
            bool ok = true;
            auto put = [&](Formula x) {
                if (l.count(x)) return;
                if (l.count(negate_syntactic(x))) ok = false;
                l.insert(x);
                work.push_back(x);
            };
            for (auto x : forced) put(x);
            for (std::size_t i = 0; i < pend.size(); ++i)
                put(((choice >> i) & 1u) ? pend[i] : pend[i]->args[0]);
            if (!ok) continue;
            std::vector<Label> found;
            saturate(l, work, found);
            // a label may also fulfil any of its own AF obligations on the spot
            std::set<Label> seen(found.begin(), found.end());
            for (std::size_t i = 0; i < found.size(); ++i)
                for (auto a : pending_af(found[i])) {
                    std::vector<Label> more;
                    Label l2 = found[i];
                    if (l2.count(negate_syntactic(a->args[0]))) continue;
                    l2.insert(a->args[0]);
                    saturate(std::move(l2), {a->args[0]}, more);
                    for (auto& c : more)
                        if (seen.insert(c).second) found.push_back(std::move(c));
                }
            // a label is dominated by a subset with no extra AF obligations
            std::sort(found.begin(), found.end(), [](const Label& a, const Label& b) {
                return a.size() != b.size() ? a.size() < b.size() : a < b;
            });
            std::vector<const Label*> kept;
            for (auto& c : found) {
                Label pc = pending_af(c);
                bool dominated = false;
                for (auto* k : kept) {
                    if (!std::includes(c.begin(), c.end(), k->begin(), k->end(), FormulaLess{})) continue;
                    Label pk = pending_af(*k);
                    if (std::includes(pc.begin(), pc.end(), pk.begin(), pk.end(), FormulaLess{})) {
                        dominated = true;
                        break;
                    }
                }
                if (dominated) continue;
                kept.push_back(&c);
                int id = intern(c);
                if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
            }
        }
        return expand_memo_.emplace(key, ids).first->second;
    }

    bool compatible(const Label& from, const Label& to, const Label& g) const {
        for (auto x : next_x(from)) if (!to.count(x)) return false;
        for (auto x : g) if (!to.count(x)) return false;
        for (auto a : pending_af(from))
            if (!to.count(a) && !to.count(a->args[0])) return false;
        return true;
    }

    /// Sub-balloons of a world: one per EG / EX formula in its label.
    std::optional<std::vector<int>> valid(int id, int level) {
        auto key = std::make_pair(id, level);
        auto it = valid_memo_.find(key);
        if (it != valid_memo_.end()) return it->second;
        const Label l = labels_[id];
        Label x = next_x(l), pend = pending_af(l);
        std::vector<int> kids;
        bool ok = true;
        for (auto g : l) {
            if (!g->is_quant() || g->q != PathQ::E) continue;
            std::optional<int> p;
            if (g->op == TOp::G) p = path(Label{g->args[0]}, pend, x, level - 1);
            else if (g->op == TOp::X) {
                Label x2 = x;
                x2.insert(g->args[0]);
                p = path({}, pend, x2, level - 1);
            } else continue;
            if (!p) { ok = false; break; }
            kids.push_back(*p);
        }
        std::optional<std::vector<int>> r;
        if (ok) r = kids;
        valid_memo_.emplace(key, r);
        return r;
    }

    std::optional<int> path(const Label& g, const Label& pend, const Label& x, int level) {
        if (level <= 0) return std::nullopt;
        Key key{g, pend, x};
        auto& e = memo_[key];
        if (e.ok_level <= level) return e.path;
        if (e.fail_level >= level) return std::nullopt;
        auto r = search(g, pend, x, level);
        auto& e2 = memo_[key];
        if (r) {
            e2.ok_level = std::min(e2.ok_level, level);
            e2.path = *r;
        } else {
            e2.fail_level = std::max(e2.fail_level, level);
        }
        return r;
    }

    std::optional<int> search(const Label& g, const Label& pend, const Label& x, int level) {
        Label forced0 = x;
        forced0.insert(g.begin(), g.end());
        // prefix search: breadth-first over valid labels
        std::map<int, int> parent;      // label -> predecessor label (-1 for start)
        std::map<int, int> depth;
        std::vector<int> order;
        std::deque<int> queue;
        for (int id : expand(forced0, pend)) {
            if (parent.count(id) || !valid(id, level)) continue;
            parent[id] = -1;
            depth[id] = 0;
            queue.push_back(id);
        }
        auto successors = [&](int id) {
            const Label& l = labels_[id];
            Label forced = next_x(l);
            forced.insert(g.begin(), g.end());
            return expand(forced, pending_af(l));
        };
        while (!queue.empty()) {
            int id = queue.front();
            queue.pop_front();
            order.push_back(id);
            ++explored_;
            deadline_.check();
            if (depth[id] >= cap_) {
                truncated_ = true;
                continue;
            }
            for (int s : successors(id)) {
                if (parent.count(s) || !valid(s, level)) continue;
                parent[s] = id;
                depth[s] = depth[id] + 1;
                queue.push_back(s);
            }
        }
        for (int star : order) {
            auto cyc = close_cycle(star, g, level);
            if (!cyc) continue;
            std::vector<int> prefix;
            for (int v = parent[star]; v != -1; v = parent[v]) prefix.push_back(v);
            std::reverse(prefix.begin(), prefix.end());
            Path p;
            p.labels = prefix;
            p.loop = int(prefix.size());
            p.labels.insert(p.labels.end(), cyc->begin(), cyc->end());
            for (int id : p.labels) p.kids.push_back(*valid(id, level));
            paths_.push_back(std::move(p));
            return int(paths_.size()) - 1;
        }
        return std::nullopt;
    }

    /// Cycle through `star` in which every AF pending at star is fulfilled.
    std::optional<std::vector<int>> close_cycle(int star, const Label& g, int level) {
        const Label& ls = labels_[star];
        std::vector<Formula> need;
        for (auto a : pending_af(ls)) need.push_back(a->args[0]);
        const unsigned full = (1u << need.size()) - 1;
        auto gain = [&](int id) {
            unsigned m = 0;
            for (std::size_t i = 0; i < need.size(); ++i)
                if (labels_[id].count(need[i])) m |= 1u << i;
            return m;
        };
        using State = std::pair<int, unsigned>;
        std::map<State, State> parent;
        std::map<State, int> depth;
        std::deque<State> queue;
        State s0{star, 0u};
        parent[s0] = {-1, 0};
        depth[s0] = 0;
        queue.push_back(s0);
        while (!queue.empty()) {
            State s = queue.front();
            queue.pop_front();
            ++explored_;
            if (s.second == full && compatible(labels_[s.first], ls, g)) {
                std::vector<int> cyc;
                for (State v = s; v.first != -1; v = parent[v]) cyc.push_back(v.first);
                std::reverse(cyc.begin(), cyc.end());
                return cyc;
            }
            if (depth[s] >= cap_) {
                truncated_ = true;
                continue;
            }
            Label forced = next_x(labels_[s.first]);
            forced.insert(g.begin(), g.end());
            for (int t : expand(forced, pending_af(labels_[s.first]))) {
                if (!valid(t, level)) continue;
                State n{t, s.second | gain(t)};
                if (parent.count(n)) continue;
                parent[n] = s;
                depth[n] = depth[s] + 1;
                queue.push_back(n);
            }
        }
        return std::nullopt;
    }

    // ── witness ──

    void instantiate(int pid, int from, Model& m) {
        const Path& p = paths_[pid];
        std::vector<int> ws;
        for (int id : p.labels) {
            if (++built_worlds_ > opt_.max_witness_worlds) throw BudgetExceeded("witness exceeds world limit");
            std::set<std::string> props;
            for (auto g : labels_[id])
                if (g->is_prop()) props.insert(g->name);
            ws.push_back(m.add_world("w" + std::to_string(m.size()), props));
        }
        if (from >= 0) m.add_edge(from, ws[0]);
        for (std::size_t i = 0; i + 1 < ws.size(); ++i) m.add_edge(ws[i], ws[i + 1]);
        m.add_edge(ws.back(), ws[p.loop]);
        for (std::size_t i = 0; i < ws.size(); ++i)
            for (int k : p.kids[i]) instantiate(k, ws[i], m);
    }
};

inline SatResult sat_balloon(Formula f, const BalloonOptions& opt = {}) {
    BalloonSolver s(f, opt);
    return s.solve();
}

} // namespace ctlf

#endif // CTLF_SAT_BALLOON_HPP
