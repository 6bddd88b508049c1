// ============================================================================
// ctlf/sat_common.hpp: shared result and budget types for the sat engines
// ============================================================================

#ifndef CTLF_SAT_COMMON_HPP
#define CTLF_SAT_COMMON_HPP

#include "ctlf/bdd.hpp"
#include "ctlf/formula.hpp"
#include "ctlf/kripke.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <optional>
#include <unordered_set>
#include <string>

namespace ctlf {

enum class SatStatus { Sat, Unsat, Unknown };

inline const char* to_string(SatStatus s) {
    switch (s) {
        case SatStatus::Sat: return "sat";
        case SatStatus::Unsat: return "unsat";
        case SatStatus::Unknown: return "unknown";
    }
    return "?";
}

struct SatStats {
    std::size_t nodes = 0;
    double millis = 0;
};

struct SatResult {
    SatStatus status = SatStatus::Unknown;
    std::optional<Model> witness;
    SatStats stats;
    std::string engine;
    std::string reason;        // why unknown, if it is
    bool exhaustive = true;    // brute force: whether unsat is a proof

    bool sat() const { return status == SatStatus::Sat; }
    bool unsat() const { return status == SatStatus::Unsat; }
    bool unknown() const { return status == SatStatus::Unknown; }
};

/// Resource limits shared by all engines.  Environment variables
/// CTLF_BUDGET_NODES and CTLF_BUDGET_MILLIS override the defaults.
struct Budget {
    std::size_t nodes = 4'000'000;
    double millis = 600'000;

    static Budget from_env() {
        Budget b;
        if (const char* s = std::getenv("CTLF_BUDGET_NODES")) b.nodes = std::strtoull(s, nullptr, 10);
        if (const char* s = std::getenv("CTLF_BUDGET_MILLIS")) b.millis = std::strtod(s, nullptr);
        return b;
    }
};

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double millis() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

/// Throws BudgetExceeded once the wall-clock allowance is spent.
class Deadline {
public:
    explicit Deadline(double millis) : limit_(millis) {}
    void check() const {
        if (watch_.millis() > limit_) throw BudgetExceeded("time budget exhausted");
    }
    double elapsed() const { return watch_.millis(); }
    void restart() { watch_ = Stopwatch{}; }

private:
    Stopwatch watch_;
    double limit_;
};

/// Evaluates the Boolean skeleton of f; propositions and temporal
/// subformulas are leaves whose value comes from `leaf`.
template <class Leaf>
bool eval_skeleton(Formula f, const Leaf& leaf) {
    if (!f->is_apply()) return leaf(f);
    std::size_t idx = 0;
    for (auto a : f->args) idx = (idx << 1) | (eval_skeleton(a, leaf) ? 1u : 0u);
    return f->table.at(idx);
}

/// Temporal subformulas of f not nested under another temporal operator,
/// in first-occurrence order.
inline std::vector<Formula> top_temporal_atoms(Formula f) {
    std::vector<Formula> out;
    std::unordered_set<Formula> seen;
    std::function<void(Formula)> go = [&](Formula g) {
        if (!seen.insert(g).second) return;
        if (g->is_quant()) {
            out.push_back(g);
            return;
        }
        for (auto a : g->args) go(a);
    };
    go(f);
    return out;
}

/// Confirms a sat verdict: the witness must exist and satisfy f at its root.
inline bool witness_confirms(const SatResult& r, Formula f) {
    if (!r.sat()) return true;
    if (!r.witness) return false;
    try {
        return model_check(*r.witness, f);
    } catch (const Error&) {
        return false;
    }
}

} // namespace ctlf

#endif // CTLF_SAT_COMMON_HPP
