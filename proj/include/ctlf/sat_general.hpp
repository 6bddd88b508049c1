// ============================================================================
// ctlf/sat_general.hpp: generic satisfiability via a symbolic Hintikka tableau
// ============================================================================
//
// States of the tableau are truth assignments to the elementary formulas of
// the closure: the propositions plus one variable per universal temporal
// formula (an existential formula is the negation of its universal dual).
// Every such assignment determines the truth of every closure member, so the
// local conditions on labels hold by construction.  Sets of states are BDDs
// over interleaved current/next copies of the elementary variables.
//
//   per AOψ        local                 transition            E-requirement
//   AX ψ           -                     v → ψ'                ¬v ⇒ ∃ ¬ψ'
//   AF ψ           ψ → v                 v∧¬ψ → v'             ¬v ⇒ ∃ ¬v'
//   AG ψ           v → ψ                 v → v'                ¬v∧ψ ⇒ ∃ ¬v'
//   A[a U b]       b → v, v → a∨b        v∧¬b → v'             ¬v∧a ⇒ ∃ ¬v'
//   A[a R b]       v → b, a∧b → v        v∧¬a → v'             ¬v∧b ⇒ ∃ ¬v'
//
// Eventualities: AF/AU are universal (every successor must make progress),
// ¬AG (= EF) and ¬AR (= EU) are existential (one successor must).
//
// The surviving set is νZ. Cons ∧ ⋀(need → EX(Z ∧ sat)) ∧ ⋀ μY.(...) and a
// model is read off by pursuing eventualities round-robin along their
// rank layers.
//
// ============================================================================

#ifndef CTLF_SAT_GENERAL_HPP
#define CTLF_SAT_GENERAL_HPP

#include "ctlf/sat_common.hpp"

#include <map>
#include <memory>
#include <set>
#include <unordered_set>
#include <unordered_map>
#include <vector>

namespace ctlf {

struct GeneralOptions {
    Budget budget = Budget::from_env();
    std::size_t closure_cap = 0;       // 0 = unlimited; otherwise unknown above it
    std::size_t max_witness_worlds = 200'000;
};

class SymbolicTableau {
public:
    using Ref = BddManager::Ref;

    SymbolicTableau(Formula f, const GeneralOptions& opt)
        : f_(f), opt_(opt), deadline_(opt.budget.millis) {
        collect(f);
        M_ = std::make_unique<BddManager>(int(elem_.size()) * 2 + 2, opt.budget.nodes);
    }

    SatResult solve() {
        Stopwatch watch;
        SatResult res;
        res.engine = "general";
        try {
            if (opt_.closure_cap && closure(f_).size() > opt_.closure_cap) {
                res.status = SatStatus::Unknown;
                res.reason = "closure size above cap";
            } else {
                build();
                Ref z = greatest_fixpoint();
                Ref init = M_->land(z, chi(f_, false));
                if (init == BddManager::False) {
                    res.status = SatStatus::Unsat;
                } else {
                    auto layers = eventuality_layers(z);
                    auto w = extract(z, init, layers);
                    if (w) {
                        res.status = SatStatus::Sat;
                        res.witness = std::move(*w);
                    } else {
                        res.status = SatStatus::Unknown;
                        res.reason = "witness exceeds world limit";
                    }
                }
            }
        } catch (const BudgetExceeded& e) {
            res.status = SatStatus::Unknown;
            res.reason = e.what();
        }
        res.stats.nodes = M_->node_count();
        res.stats.millis = watch.millis();
        return res;
    }

    std::size_t elementary_count() const { return elem_.size(); }

private:
    struct Req { Ref need; Ref sat_next; };
    struct Ev { bool universal; Ref active; int req; };
    struct Part { Ref rel; Ref cube; };

    Formula f_;
    GeneralOptions opt_;
    Deadline deadline_;
    std::vector<Formula> elem_;
    std::unordered_map<Formula, int> idx_;
    std::unique_ptr<BddManager> M_;
    std::unordered_map<Formula, Ref> chi_[2];
    std::vector<Ref> trans_raw_;
    std::vector<Part> parts_;
    Ref free_next_cube_ = BddManager::True;
    Ref cur_cube_ = BddManager::True;
    Ref cons_ = BddManager::True;
    std::vector<Req> reqs_;
    std::vector<Ev> evs_;
    std::vector<int> to_next_map_;

    static int cur(int k) { return 2 * k; }
    static int nxt(int k) { return 2 * k + 1; }

    static Formula rep(Formula g) { return g->q == PathQ::A ? g : dual_formula(g); }

    void add_elem(Formula g) {
        if (!idx_.count(g)) {
            idx_[g] = int(elem_.size());
            elem_.push_back(g);
        }
    }

    void collect(Formula root) {
        std::vector<Formula> stack{root};
        std::unordered_set<Formula> seen;
        while (!stack.empty()) {
            Formula g = stack.back();
            stack.pop_back();
            if (!seen.insert(g).second) continue;
            if (g->is_prop()) add_elem(g);
            if (g->is_quant()) {
                Formula r = rep(g);
                add_elem(r);
                for (auto it = r->args.rbegin(); it != r->args.rend(); ++it) stack.push_back(*it);
            } else {
                for (auto it = g->args.rbegin(); it != g->args.rend(); ++it) stack.push_back(*it);
            }
        }
    }

    Ref chi(Formula g, bool next) {
        auto& memo = chi_[next];
        auto it = memo.find(g);
        if (it != memo.end()) return it->second;
        Ref r = BddManager::False;
        switch (g->kind) {
            case Kind::Prop: {
                int k = idx_.at(g);
                r = M_->var(next ? nxt(k) : cur(k));
                break;
            }
            case Kind::Apply: {
                std::vector<Ref> args;
                for (auto a : g->args) args.push_back(chi(a, next));
                r = compose(g->table, args, 0, 0);
                break;
            }
            case Kind::Quant: {
                if (g->q == PathQ::A) {
                    int k = idx_.at(g);
                    r = M_->var(next ? nxt(k) : cur(k));
                } else {
                    r = M_->lnot(chi(dual_formula(g), next));
                }
                break;
            }
        }
        memo.emplace(g, r);
        return r;
    }

    Ref compose(const TruthTable& t, const std::vector<Ref>& args, int i, std::size_t idx) {
        if (i == t.arity) return t.at(idx) ? BddManager::True : BddManager::False;
        Ref hi = compose(t, args, i + 1, idx * 2 + 1);
        Ref lo = compose(t, args, i + 1, idx * 2);
        return M_->ite(args[i], hi, lo);
    }

    Ref to_next(Ref x) { return M_->rename(x, to_next_map_, 1); }

    void build() {
        int n = int(elem_.size());
        to_next_map_.assign(2 * n + 2, -1);
        for (int k = 0; k < n; ++k) to_next_map_[cur(k)] = nxt(k);
        std::vector<int> curs;
        for (int k = 0; k < n; ++k) curs.push_back(cur(k));
        cur_cube_ = M_->cube(curs);

        reqs_.push_back({BddManager::True, BddManager::True});  // seriality
        for (int k = 0; k < n; ++k) {
            Formula g = elem_[k];
            if (!g->is_quant()) continue;
            Ref v = M_->var(cur(k)), vn = M_->var(nxt(k));
            Ref nv = M_->lnot(v), nvn = M_->lnot(vn);
            Ref a = chi(g->args[0], false);
            switch (g->op) {
                case TOp::X:
                    trans_raw_.push_back(M_->limp(v, chi(g->args[0], true)));
                    reqs_.push_back({nv, M_->lnot(chi(g->args[0], true))});
                    break;
                case TOp::F:
                    cons_ = M_->land(cons_, M_->limp(a, v));
                    trans_raw_.push_back(M_->limp(M_->land(v, M_->lnot(a)), vn));
                    reqs_.push_back({nv, nvn});
                    evs_.push_back({true, M_->land(v, M_->lnot(a)), -1});
                    break;
                case TOp::G:
                    cons_ = M_->land(cons_, M_->limp(v, a));
                    trans_raw_.push_back(M_->limp(v, vn));
                    reqs_.push_back({M_->land(nv, a), nvn});
                    evs_.push_back({false, M_->land(nv, a), int(reqs_.size()) - 1});
                    break;
                case TOp::U: {
                    Ref b = chi(g->args[1], false);
                    cons_ = M_->land(cons_, M_->limp(b, v));
                    cons_ = M_->land(cons_, M_->limp(v, M_->lor(a, b)));
                    trans_raw_.push_back(M_->limp(M_->land(v, M_->lnot(b)), vn));
                    reqs_.push_back({M_->land(nv, a), nvn});
                    evs_.push_back({true, M_->land(v, M_->lnot(b)), -1});
                    break;
                }
                case TOp::R: {
                    Ref b = chi(g->args[1], false);
                    cons_ = M_->land(cons_, M_->limp(v, b));
                    cons_ = M_->land(cons_, M_->limp(M_->land(a, b), v));
                    trans_raw_.push_back(M_->limp(M_->land(v, M_->lnot(a)), vn));
                    reqs_.push_back({M_->land(nv, b), nvn});
                    evs_.push_back({false, M_->land(nv, b), int(reqs_.size()) - 1});
                    break;
                }
            }
        }
        cluster_partitions();
    }

    std::vector<int> support(Ref f) {
        std::vector<char> seen_var(M_->num_vars(), 0);
        std::unordered_set<Ref> seen;
        std::vector<Ref> stack{f};
        while (!stack.empty()) {
            Ref g = stack.back();
            stack.pop_back();
            if (g <= BddManager::True || !seen.insert(g).second) continue;
            seen_var[M_->var_of(g)] = 1;
            stack.push_back(M_->low(g));
            stack.push_back(M_->high(g));
        }
        std::vector<int> v;
        for (int i = 0; i < int(seen_var.size()); ++i)
            if (seen_var[i]) v.push_back(i);
        return v;
    }

    static std::size_t dag_size(const BddManager& m, Ref f) {
        std::unordered_set<Ref> seen;
        std::vector<Ref> stack{f};
        while (!stack.empty()) {
            Ref g = stack.back();
            stack.pop_back();
            if (g <= BddManager::True || !seen.insert(g).second) continue;
            stack.push_back(m.low(g));
            stack.push_back(m.high(g));
        }
        return seen.size();
    }

    void cluster_partitions() {
        std::vector<Ref> clusters;
        Ref acc = BddManager::True;
        for (Ref t : trans_raw_) {
            if (t == BddManager::True) continue;
            Ref joined = M_->land(acc, t);
            if (acc != BddManager::True && dag_size(*M_, joined) > 2500) {
                clusters.push_back(acc);
                acc = t;
            } else {
                acc = joined;
            }
        }
        if (acc != BddManager::True) clusters.push_back(acc);
        int n = int(elem_.size());
        std::vector<int> last(n, -1);
        for (int i = 0; i < int(clusters.size()); ++i)
            for (int v : support(clusters[i]))
                if (v % 2 == 1) last[v / 2] = i;
        std::vector<int> free_vars;
        std::vector<std::vector<int>> quant(clusters.size());
        for (int k = 0; k < n; ++k) {
            if (last[k] < 0) free_vars.push_back(nxt(k));
            else quant[last[k]].push_back(nxt(k));
        }
        free_next_cube_ = M_->cube(free_vars);
        for (int i = 0; i < int(clusters.size()); ++i) parts_.push_back({clusters[i], M_->cube(quant[i])});
    }

    /// States with some transition-compatible successor in xn (a next-state set).
    Ref pre_exists(Ref xn) {
        Ref acc = M_->exists(xn, free_next_cube_);
        for (auto& p : parts_) {
            if (acc == BddManager::False) return acc;
            acc = M_->and_exists(acc, p.rel, p.cube);
        }
        return acc;
    }

    /// Least fixpoint of the eventuality's progress condition inside z.  The
    /// preimage distributes over union, so each round only adds the preimage
    /// of the newest layer to a per-requirement accumulator.
    std::vector<Ref> layers_for(const Ev& e, Ref z) {
        std::vector<int> rs;
        Ref live = M_->land(z, e.active);
        if (e.universal) {
            for (int r = 0; r < int(reqs_.size()); ++r)
                if (M_->land(live, reqs_[r].need) != BddManager::False) rs.push_back(r);
        } else {
            rs.push_back(e.req);
        }
        std::vector<Ref> acc(rs.size(), BddManager::False);
        std::vector<Ref> layers;
        Ref y = BddManager::False, frontier = BddManager::False;
        Ref idle = M_->land(z, M_->lnot(e.active));
        while (true) {
            deadline_.check();
            Ref ok = BddManager::True;
            Ref fn = to_next(frontier);
            for (std::size_t i = 0; i < rs.size(); ++i) {
                const Req& r = reqs_[rs[i]];
                if (frontier != BddManager::False)
                    acc[i] = M_->lor(acc[i], pre_exists(M_->land(fn, r.sat_next)));
                ok = M_->land(ok, e.universal ? M_->limp(r.need, acc[i]) : acc[i]);
            }
            Ref ny = M_->lor(idle, M_->land(z, ok));
            if (ny == y) break;
            frontier = M_->land(ny, M_->lnot(y));
            layers.push_back(ny);
            y = ny;
        }
        return layers;
    }

    Ref greatest_fixpoint() {
        Ref z = cons_;
        while (true) {
            deadline_.check();
            Ref nz = z;
            Ref zn = to_next(z);
            for (auto& r : reqs_) {
                nz = M_->land(nz, M_->limp(r.need, pre_exists(M_->land(zn, r.sat_next))));
                if (nz == BddManager::False) return nz;
            }
            for (auto& e : evs_) {
                auto layers = layers_for(e, nz);
                nz = layers.empty() ? BddManager::False : layers.back();
                if (nz == BddManager::False) return nz;
            }
            if (nz == z) return z;
            z = nz;
        }
    }

    std::vector<std::vector<Ref>> eventuality_layers(Ref z) {
        std::vector<std::vector<Ref>> all;
        for (auto& e : evs_) all.push_back(layers_for(e, z));
        return all;
    }

    // ── witness extraction ──

    using State = std::vector<char>;  // values of the current-state variables

    State decode_next(const std::vector<char>& a) const {
        State s(elem_.size());
        for (std::size_t k = 0; k < elem_.size(); ++k) s[k] = a[nxt(int(k))];
        return s;
    }
    std::vector<char> as_assignment(const State& s) const {
        std::vector<char> a(M_->num_vars(), 0);
        for (std::size_t k = 0; k < s.size(); ++k) a[cur(int(k))] = s[k];
        return a;
    }
    Ref successors_of(const State& s) {
        std::vector<int> curs;
        for (std::size_t k = 0; k < elem_.size(); ++k) curs.push_back(cur(int(k)));
        Ref mt = M_->minterm(curs, as_assignment(s));
        Ref acc = BddManager::True;
        for (auto& p : parts_) acc = M_->land(acc, M_->and_exists(mt, p.rel, cur_cube_));
        return acc;
    }
    static int rank_of(const BddManager& m, const std::vector<Ref>& layers, const std::vector<char>& a) {
        for (int i = 0; i < int(layers.size()); ++i)
            if (m.eval(layers[i], a)) return i;
        return -1;
    }

    std::optional<Model> extract(Ref z, Ref init, const std::vector<std::vector<Ref>>& layers) {
        const int nev = int(evs_.size());
        std::map<std::pair<State, int>, int> world_of;
        std::vector<std::pair<State, int>> worlds;
        Model m;
        auto world = [&](const State& s, int idx) -> int {
            auto key = std::make_pair(s, idx);
            auto it = world_of.find(key);
            if (it != world_of.end()) return it->second;
            int w = int(worlds.size());
            world_of.emplace(key, w);
            worlds.push_back(key);
            std::set<std::string> props;
            for (std::size_t k = 0; k < elem_.size(); ++k)
                if (elem_[k]->is_prop() && s[k]) props.insert(elem_[k]->name);
            m.add_world("s" + std::to_string(w), props);
            return w;
        };
        std::vector<char> a0 = M_->pick_one(init);
        State s0(elem_.size());
        for (std::size_t k = 0; k < elem_.size(); ++k) s0[k] = a0[cur(int(k))];
        world(s0, 0);
        Ref zn = to_next(z);
        std::vector<std::vector<Ref>> layers_next(layers.size());
        for (std::size_t e = 0; e < layers.size(); ++e)
            for (Ref l : layers[e]) layers_next[e].push_back(to_next(l));

        for (std::size_t w = 0; w < worlds.size(); ++w) {
            if (worlds.size() > opt_.max_witness_worlds) return std::nullopt;
            deadline_.check();
            State s = worlds[w].first;
            int idx = worlds[w].second;
            auto a = as_assignment(s);
            int pursued = -1, rank = -1;
            for (int j = 0; j < nev; ++j) {
                int e = (idx + j) % nev;
                if (M_->eval(evs_[e].active, a)) {
                    pursued = e;
                    rank = rank_of(*M_, layers[e], a);
                    break;
                }
            }
            Ref succ = M_->land(successors_of(s), zn);
            for (int r = 0; r < int(reqs_.size()); ++r) {
                if (!M_->eval(reqs_[r].need, a)) continue;
                Ref target = M_->land(succ, reqs_[r].sat_next);
                int next_idx = idx;
                if (pursued >= 0) {
                    const Ev& e = evs_[pursued];
                    bool constrained = e.universal || e.req == r;
                    if (constrained && rank > 0) target = M_->land(target, layers_next[pursued][rank - 1]);
                    next_idx = constrained ? pursued : (pursued + 1) % nev;
                }
                if (target == BddManager::False) throw std::logic_error("tableau witness extraction failed");
                int u = world(decode_next(M_->pick_one(target)), next_idx);
                m.add_edge(int(w), u);
            }
        }
        m.root = 0;
        return m;
    }
};

inline SatResult sat_general(Formula f, const GeneralOptions& opt = {}) {
    SymbolicTableau t(f, opt);
    return t.solve();
}

} // namespace ctlf

#endif // CTLF_SAT_GENERAL_HPP
