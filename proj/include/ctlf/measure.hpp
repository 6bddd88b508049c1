// ============================================================================
// ctlf/measure.hpp: minimal model size and extent by exhaustive search
// ============================================================================
//
// Both measures run over the symbolic structure space of sat_bruteforce:
// one query per world count k covers every serial structure with k worlds,
// including all smaller ones as structures with unreachable padding.
//
// ============================================================================

#ifndef CTLF_MEASURE_HPP
#define CTLF_MEASURE_HPP

#include "ctlf/sat_bruteforce.hpp"

namespace ctlf {

struct MeasureResult {
    std::optional<int> minimum;    // none: nothing found up to the bound
    int bound = 0;                 // world cap searched
    std::optional<Model> witness;
    bool exhaustive = false;       // minimum (or its absence) holds without a cap
    std::string reason;            // set when the search gave up
    bool budget_exceeded = false;
};

/// Smallest k ≤ cap with a serial rooted model of f on k worlds.
inline MeasureResult min_model_size(Formula f, int cap, const BruteOptions& opt = {}) {
    auto props = props_of(f);
    check_space(cap, props.size(), opt);
    MeasureResult res;
    res.bound = cap;
    try {
        for (int k = 1; k <= cap; ++k) {
            StructureSpace S(k, props, opt.budget);
            auto& M = S.mgr();
            auto good = M.land(S.serial(), S.truth(f)[0]);
            if (good == BddManager::False) continue;
            res.minimum = k;
            res.witness = restrict_reachable(S.decode(M.pick_one(good)));
            res.exhaustive = true;  // every smaller size was refuted
            return res;
        }
        res.exhaustive = temporal_depth(f) == 0;
    } catch (const BudgetExceeded& e) {
        res.budget_exceeded = true;
        res.reason = e.what();
    }
    return res;
}

/// Least extent over all models of f with at most cap worlds.  Sizes are
/// searched in increasing order and each only for extents below the best
/// found so far.  Extent 0 means a single reachable world, so a minimum of
/// 0 or 1 is certified without a cap; larger minima only up to the cap.
inline MeasureResult min_model_extent(Formula f, int cap, const BruteOptions& opt = {}) {
    auto props = props_of(f);
    check_space(cap, props.size(), opt);
    MeasureResult res;
    res.bound = cap;
    try {
        for (int k = 1; k <= cap; ++k) {
            StructureSpace S(k, props, opt.budget);
            auto& M = S.mgr();
            auto good = M.land(S.serial(), S.truth(f)[0]);
            if (good == BddManager::False) continue;
            const int limit = res.minimum ? *res.minimum : k;
            for (int e = 0; e < limit; ++e) {
                auto g = M.land(good, S.extent_at_most(e));
                if (g == BddManager::False) continue;
                res.minimum = e;
                res.witness = restrict_reachable(S.decode(M.pick_one(g)));
                break;
            }
            if (res.minimum == 0) break;
        }
        res.exhaustive = res.minimum ? *res.minimum <= 1 : temporal_depth(f) == 0;
    } catch (const BudgetExceeded& e) {
        res.budget_exceeded = true;
        res.reason = e.what();
    }
    return res;
}

} // namespace ctlf

#endif // CTLF_MEASURE_HPP
