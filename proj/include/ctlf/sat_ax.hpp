// ============================================================================
// ctlf/sat_ax.hpp: satisfiability for formulas whose only operators are AX/EX
// ============================================================================

#ifndef CTLF_SAT_AX_HPP
#define CTLF_SAT_AX_HPP

#include "ctlf/sat_common.hpp"

#include <map>

namespace ctlf {

/// Backtracking over tree-shaped models of depth at most the temporal depth.
/// Each world fixes the truth of its propositions and top-level AX/EX atoms;
/// every existential atom gets its own successor, all of which must satisfy
/// the universal atoms.  A world whose obligations are met by a single
/// self-looping world becomes a leaf.  Identical obligations share a world.
class AxSolver {
public:
    AxSolver(Formula f, const Budget& budget) : f_(f), deadline_(budget.millis) {
        auto ops = operators_used(f);
        if (!(ops.empty() || (ops.size() == 1 && *ops.begin() == TOp::X)))
            throw Error("fragment", "sat_ax_bounded admits only AX/EX");
    }

    SatResult solve() {
        Stopwatch watch;
        SatResult res;
        res.engine = "ax";
        try {
            auto w = world_for(f_);
            if (w) {
                model_.root = *w;
                res.witness = restrict_reachable(model_);
                if (!model_check(*res.witness, f_)) throw std::logic_error("sat_ax_bounded produced a non-model");
                res.status = SatStatus::Sat;
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
    Formula f_;
    Deadline deadline_;
    Model model_;
    std::map<Formula, std::optional<int>, FormulaLess> memo_;
    std::size_t explored_ = 0;

    static std::set<std::string> label_of(const std::vector<std::string>& props, unsigned mask) {
        std::set<std::string> s;
        for (std::size_t i = 0; i < props.size(); ++i)
            if ((mask >> i) & 1u) s.insert(props[i]);
        return s;
    }

    std::optional<int> self_loop_world(Formula g) {
        auto props = propositions(g);
        for (unsigned mask = 0; mask < (1u << props.size()); ++mask) {
            ++explored_;
            Model one;
            one.add_world("", label_of(props, mask));
            one.add_edge(0, 0);
            if (model_check(one, g)) {
                int w = model_.add_world("w" + std::to_string(model_.size()), label_of(props, mask));
                model_.add_edge(w, w);
                return w;
            }
        }
        return std::nullopt;
    }

    std::optional<int> world_for(Formula g) {
        auto it = memo_.find(g);
        if (it != memo_.end()) return it->second;
        deadline_.check();
        auto r = self_loop_world(g);
        if (!r && temporal_depth(g) > 0) r = expand(g);
        memo_.emplace(g, r);
        return r;
    }

    std::optional<int> expand(Formula g) {
        // leaves of the Boolean skeleton: propositions and AX/EX atoms
        std::vector<Formula> leaves;
        std::function<void(Formula)> collect = [&](Formula h) {
            if (!h->is_apply()) {
                if (std::find(leaves.begin(), leaves.end(), h) == leaves.end()) leaves.push_back(h);
                return;
            }
            for (auto a : h->args) collect(a);
        };
        collect(g);
        const int n = int(leaves.size());
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            ++explored_;
            bool ok = eval_skeleton(g, [&](Formula leaf) {
                auto i = std::find(leaves.begin(), leaves.end(), leaf) - leaves.begin();
                return ((mask >> i) & 1u) != 0;
            });
            if (!ok) continue;
            std::vector<Formula> ex, ax;
            std::set<std::string> label;
            for (int i = 0; i < n; ++i) {
                bool v = (mask >> i) & 1u;
                Formula h = leaves[i];
                if (h->is_prop()) {
                    if (v) label.insert(h->name);
                    continue;
                }
                Formula lit = v ? h : dual_formula(h);
                (lit->q == PathQ::E ? ex : ax).push_back(lit->args[0]);
            }
            Formula all_ax = conj(ax);
            std::vector<Formula> demands;
            for (auto e : ex) demands.push_back(ax.empty() ? e : land(e, all_ax));
            if (demands.empty()) demands.push_back(ax.empty() ? top() : all_ax);
            std::vector<int> children;
            bool good = true;
            for (auto d : demands) {
                auto c = world_for(d);
                if (!c) {
                    good = false;
                    break;
                }
                children.push_back(*c);
            }
            if (!good) continue;
            int w = model_.add_world("w" + std::to_string(model_.size()), label);
            for (int c : children) model_.add_edge(w, c);
            return w;
        }
        return std::nullopt;
    }
};

inline SatResult sat_ax_bounded(Formula f, const Budget& budget = Budget::from_env()) {
    AxSolver s(f, budget);
    return s.solve();
}

} // namespace ctlf

#endif // CTLF_SAT_AX_HPP
