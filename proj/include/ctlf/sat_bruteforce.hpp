// ============================================================================
// ctlf/sat_bruteforce.hpp: exhaustive small-model search
// ============================================================================
//
// For a fixed world count k the space of rooted structures (root = world 0)
// is encoded by one BDD variable per edge and per (world, proposition).  The
// truth of every subformula at every world is computed as a BDD over that
// space with explicit fixpoints, so one query covers all 2^(k² + k·|P|)
// structures.  Structures of fewer worlds appear as the ones with unreachable
// padding; world counts are tried in increasing order, so the first hit is a
// smallest model and has no unreachable worlds.
//
// ============================================================================

#ifndef CTLF_SAT_BRUTEFORCE_HPP
#define CTLF_SAT_BRUTEFORCE_HPP

#include "ctlf/sat_common.hpp"

#include <cmath>
#include <functional>
#include <memory>
#include <unordered_map>

namespace ctlf {

/// All structures with exactly k worlds over a fixed proposition list.
class StructureSpace {
public:
    using Ref = BddManager::Ref;

    StructureSpace(int k, std::vector<std::string> props, const Budget& budget)
        : k_(k), props_(std::move(props)), deadline_(budget.millis) {
        P_ = int(props_.size());
        M_ = std::make_unique<BddManager>(k_ * (P_ + k_), budget.nodes);
        for (std::size_t i = 0; i < props_.size(); ++i) prop_idx_[props_[i]] = int(i);
    }

    BddManager& mgr() { return *M_; }
    void restart_clock() { deadline_.restart(); }
    int worlds() const { return k_; }

    int label_var(int w, int p) const { return w * (P_ + k_) + p; }
    int edge_var(int w, int u) const { return w * (P_ + k_) + P_ + u; }

    Ref edge(int w, int u) { return M_->var(edge_var(w, u)); }

    Ref serial() {
        Ref acc = BddManager::True;
        for (int w = 0; w < k_; ++w) {
            Ref any = BddManager::False;
            for (int u = 0; u < k_; ++u) any = M_->lor(any, edge(w, u));
            acc = M_->land(acc, any);
        }
        return acc;
    }

    /// No path from world 0 visits more than e+1 distinct worlds.
    Ref extent_at_most(int e) {
        if (e + 1 >= k_) return BddManager::True;
        Ref acc = BddManager::True;
        std::vector<int> path{0};
        std::vector<char> used(k_, 0);
        used[0] = 1;
        std::function<void(Ref)> rec = [&](Ref prefix) {
            if (int(path.size()) == e + 2) {
                acc = M_->land(acc, M_->lnot(prefix));
                return;
            }
            for (int u = 0; u < k_; ++u) {
                if (used[u]) continue;
                used[u] = 1;
                path.push_back(u);
                rec(M_->land(prefix, edge(path[path.size() - 2], u)));
                path.pop_back();
                used[u] = 0;
            }
        };
        rec(BddManager::True);
        return acc;
    }

    const std::vector<Ref>& truth(Formula f) {
        auto it = memo_.find(f);
        if (it != memo_.end()) return it->second;
        deadline_.check();
        auto v = compute(f);
        return memo_.emplace(f, std::move(v)).first->second;
    }

    Model decode(const std::vector<char>& a) const {
        Model m;
        for (int w = 0; w < k_; ++w) {
            std::set<std::string> ls;
            for (int p = 0; p < P_; ++p)
                if (a[label_var(w, p)]) ls.insert(props_[p]);
            m.add_world("w" + std::to_string(w), ls);
        }
        for (int w = 0; w < k_; ++w)
            for (int u = 0; u < k_; ++u)
                if (a[edge_var(w, u)]) m.add_edge(w, u);
        m.root = 0;
        return m;
    }

private:
    using Vec = std::vector<Ref>;

    int k_, P_;
    std::vector<std::string> props_;
    std::unordered_map<std::string, int> prop_idx_;
    std::unique_ptr<BddManager> M_;
    Deadline deadline_;
    std::unordered_map<Formula, Vec> memo_;

    Vec constant(Ref r) const { return Vec(k_, r); }
    Vec negv(const Vec& a) {
        Vec r(k_);
        for (int w = 0; w < k_; ++w) r[w] = M_->lnot(a[w]);
        return r;
    }
    Vec ex(const Vec& a) {
        Vec r(k_);
        for (int w = 0; w < k_; ++w) {
            Ref acc = BddManager::False;
            for (int u = 0; u < k_; ++u) acc = M_->lor(acc, M_->land(edge(w, u), a[u]));
            r[w] = acc;
        }
        return r;
    }
    Vec ax(const Vec& a) {
        Vec r(k_);
        for (int w = 0; w < k_; ++w) {
            Ref acc = BddManager::True;
            for (int u = 0; u < k_; ++u) acc = M_->land(acc, M_->limp(edge(w, u), a[u]));
            r[w] = acc;
        }
        return r;
    }
    // μY. b ∨ (a ∧ step(Y)); at most k rounds are needed on k worlds.
    Vec lfp(const Vec& a, const Vec& b, bool universal) {
        Vec y = constant(BddManager::False);
        while (true) {
            deadline_.check();
            Vec s = universal ? ax(y) : ex(y);
            Vec ny(k_);
            for (int w = 0; w < k_; ++w) ny[w] = M_->lor(b[w], M_->land(a[w], s[w]));
            if (ny == y) return y;
            y = std::move(ny);
        }
    }
    Vec eg(const Vec& a) {
        Vec y = a;
        while (true) {
            deadline_.check();
            Vec s = ex(y);
            Vec ny(k_);
            for (int w = 0; w < k_; ++w) ny[w] = M_->land(a[w], s[w]);
            if (ny == y) return y;
            y = std::move(ny);
        }
    }
    Ref compose(const TruthTable& t, const std::vector<Ref>& args, int i, std::size_t idx) {
        if (i == t.arity) return t.at(idx) ? BddManager::True : BddManager::False;
        return M_->ite(args[i], compose(t, args, i + 1, idx * 2 + 1), compose(t, args, i + 1, idx * 2));
    }

    Vec compute(Formula f) {
        switch (f->kind) {
            case Kind::Prop: {
                Vec r(k_);
                auto it = prop_idx_.find(f->name);
                for (int w = 0; w < k_; ++w)
                    r[w] = it == prop_idx_.end() ? BddManager::False : M_->var(label_var(w, it->second));
                return r;
            }
            case Kind::Apply: {
                std::vector<Vec> args;
                for (auto a : f->args) args.push_back(truth(a));
                Vec r(k_);
                for (int w = 0; w < k_; ++w) {
                    std::vector<Ref> at;
                    for (auto& v : args) at.push_back(v[w]);
                    r[w] = compose(f->table, at, 0, 0);
                }
                return r;
            }
            case Kind::Quant: break;
        }
        const Vec a = truth(f->args[0]);
        const bool E = f->q == PathQ::E;
        const Vec tt = constant(BddManager::True);
        switch (f->op) {
            case TOp::X: return E ? ex(a) : ax(a);
            case TOp::F: return lfp(tt, a, !E);
            case TOp::G: return E ? eg(a) : negv(lfp(tt, negv(a), false));
            case TOp::U: return lfp(a, truth(f->args[1]), !E);
            case TOp::R: {
                const Vec b = truth(f->args[1]);
                return negv(lfp(negv(a), negv(b), E));
            }
        }
        return {};
    }
};

struct BruteOptions {
    Budget budget = Budget::from_env();
    int max_bdd_vars = 64;   // refuse spaces wider than this
};

/// Proposition names occurring in f, sorted.
inline std::vector<std::string> props_of(Formula f) {
    auto ps = propositions(f);
    return {ps.begin(), ps.end()};
}

inline void check_space(int worlds, std::size_t nprops, const BruteOptions& opt) {
    if (worlds < 1) throw Error("budget", "world cap must be at least 1");
    if (worlds * (worlds + int(nprops)) > opt.max_bdd_vars)
        throw Error("budget", "structure space too wide for exhaustive search");
}

/// Exhaustive search over a fixed proposition list that keeps its structure
/// spaces between queries, so subformulas shared by many formulas are
/// evaluated once.  Spaces are rebuilt when they outgrow half the node budget.
class BruteSession {
public:
    BruteSession(std::vector<std::string> props, int max_worlds, const BruteOptions& opt = {})
        : props_(std::move(props)), max_(max_worlds), opt_(opt), spaces_(max_worlds) {
        check_space(max_worlds, props_.size(), opt);
    }

    SatResult check(Formula f) {
        for (auto& p : propositions(f))
            if (std::find(props_.begin(), props_.end(), p) == props_.end())
                throw Error("budget", "proposition " + p + " outside the session");
        Stopwatch watch;
        SatResult res;
        res.engine = "brute";
        try {
            for (int k = 1; k <= max_; ++k) {
                auto& S = space(k);
                auto& M = S.mgr();
                BddManager::Ref good = M.land(S.serial(), S.truth(f)[0]);
                res.stats.nodes += M.node_count();
                if (good != BddManager::False) {
                    res.status = SatStatus::Sat;
                    res.witness = restrict_reachable(S.decode(M.pick_one(good)));
                    res.stats.millis = watch.millis();
                    return res;
                }
            }
            res.status = SatStatus::Unsat;
            res.exhaustive = temporal_depth(f) == 0;
            res.reason = "no model with at most " + std::to_string(max_) + " worlds";
        } catch (const BudgetExceeded& e) {
            for (auto& s : spaces_) s.reset();
            res.status = SatStatus::Unknown;
            res.reason = e.what();
        }
        res.stats.millis = watch.millis();
        return res;
    }

private:
    std::vector<std::string> props_;
    int max_;
    BruteOptions opt_;
    std::vector<std::unique_ptr<StructureSpace>> spaces_;

    StructureSpace& space(int k) {
        auto& s = spaces_[k - 1];
        if (s && s->mgr().node_count() > opt_.budget.nodes / 2) s.reset();
        if (!s) s = std::make_unique<StructureSpace>(k, props_, opt_.budget);
        s->restart_clock();
        return *s;
    }
};

inline SatResult sat_bruteforce(Formula f, int max_worlds, const BruteOptions& opt = {}) {
    return BruteSession(props_of(f), max_worlds, opt).check(f);
}

} // namespace ctlf

#endif // CTLF_SAT_BRUTEFORCE_HPP
