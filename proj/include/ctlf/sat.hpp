// ============================================================================
// ctlf/sat.hpp: all satisfiability engines and the fragment dispatcher
// ============================================================================

#ifndef CTLF_SAT_HPP
#define CTLF_SAT_HPP

#include "ctlf/furl.hpp"
#include "ctlf/sat_ax.hpp"
#include "ctlf/sat_balloon.hpp"
#include "ctlf/sat_bruteforce.hpp"
#include "ctlf/sat_flat.hpp"
#include "ctlf/sat_general.hpp"

namespace ctlf {

enum class Engine { Auto, General, Flat, Ax, Balloon, Brute };

inline Engine parse_engine(const std::string& s) {
    if (s == "auto") return Engine::Auto;
    if (s == "general") return Engine::General;
    if (s == "flat") return Engine::Flat;
    if (s == "ax") return Engine::Ax;
    if (s == "balloon") return Engine::Balloon;
    if (s == "brute") return Engine::Brute;
    throw Error("usage", "unknown engine '" + s + "'");
}

/// Engine chosen for f by fragment: flat, then AX-only, then {AF, AX}, else general.
/// Every engine accepts arbitrary bases, so no base translation is needed.
inline Engine choose_engine(Formula f) {
    if (temporal_depth(f) <= 1 && propositions(f).size() <= 12) return Engine::Flat;
    auto ops = operators_used(f);
    bool only_x = true, only_fx = true;
    for (auto op : ops) {
        if (op != TOp::X) only_x = false;
        if (op != TOp::X && op != TOp::F) only_fx = false;
    }
    if (only_x) return Engine::Ax;
    if (only_fx) return Engine::Balloon;
    return Engine::General;
}

inline SatResult run_engine(Engine e, Formula f, const Budget& budget = Budget::from_env(), int max_worlds = 5) {
    switch (e) {
        case Engine::Auto: return run_engine(choose_engine(f), f, budget, max_worlds);
        case Engine::General: {
            GeneralOptions o;
            o.budget = budget;
            return sat_general(f, o);
        }
        case Engine::Flat: {
            FlatOptions o;
            o.budget = budget;
            return sat_flat(f, o);
        }
        case Engine::Ax: return sat_ax_bounded(f, budget);
        case Engine::Balloon: {
            BalloonOptions o;
            o.budget = budget;
            return sat_balloon(f, o);
        }
        case Engine::Brute: {
            BruteOptions o;
            o.budget = budget;
            return sat_bruteforce(f, max_worlds, o);
        }
    }
    return {};
}

inline SatResult dispatch(Formula f, const Budget& budget = Budget::from_env()) {
    return run_engine(Engine::Auto, f, budget);
}

} // namespace ctlf

#endif // CTLF_SAT_HPP
