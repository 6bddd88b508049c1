// ============================================================================
// ctlf/bdd.hpp: a small reduced ordered BDD package
// ============================================================================
//
// Nodes live in one growable array; 0 and 1 are the terminals.  There is no
// garbage collection: a manager is created per query and thrown away.  The
// node limit turns blow-ups into a BudgetExceeded exception, which callers
// report as an unknown verdict.
//
// ============================================================================

#ifndef CTLF_BDD_HPP
#define CTLF_BDD_HPP

#include <algorithm>
#include <climits>
#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace ctlf {

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class BddManager {
public:
    using Ref = std::int32_t;
    static constexpr Ref False = 0;
    static constexpr Ref True = 1;

    explicit BddManager(int num_vars, std::size_t node_limit = 4'000'000)
        : nvars_(num_vars), limit_(node_limit) {
        nodes_.push_back({INT_MAX, 0, 0});
        nodes_.push_back({INT_MAX, 1, 1});
        table_.assign(1 << 12, -1);
        cache_.assign(1 << 14, CacheEntry{});
    }

    int num_vars() const { return nvars_; }
    std::size_t node_count() const { return nodes_.size(); }
    int var_of(Ref f) const { return nodes_[f].var; }
    Ref low(Ref f) const { return nodes_[f].lo; }
    Ref high(Ref f) const { return nodes_[f].hi; }

    Ref var(int v) { return make(v, False, True); }
    Ref nvar(int v) { return make(v, True, False); }

    Ref lnot(Ref f) { return ite(f, False, True); }
    Ref land(Ref f, Ref g) { return ite(f, g, False); }
    Ref lor(Ref f, Ref g) { return ite(f, True, g); }
    Ref limp(Ref f, Ref g) { return ite(f, g, True); }
    Ref liff(Ref f, Ref g) { return ite(f, g, lnot(g)); }

    Ref ite(Ref f, Ref g, Ref h) {
        if (f == True) return g;
        if (f == False) return h;
        if (g == h) return g;
        if (g == True && h == False) return f;
        std::uint64_t key = slot_key(OpIte, f, g, h);
        if (Ref r; lookup(key, OpIte, f, g, h, r)) return r;
        int v = top3(f, g, h);
        Ref t = ite(cof(f, v, 1), cof(g, v, 1), cof(h, v, 1));
        Ref e = ite(cof(f, v, 0), cof(g, v, 0), cof(h, v, 0));
        Ref r = make(v, e, t);
        store(key, OpIte, f, g, h, r);
        return r;
    }

    /// Cube of the given variables (positive literals).
    Ref cube(const std::vector<int>& vars) {
        std::vector<int> vs = vars;
        std::sort(vs.begin(), vs.end());
        Ref r = True;
        for (auto it = vs.rbegin(); it != vs.rend(); ++it) r = make(*it, False, r);
        return r;
    }

    Ref exists(Ref f, Ref cube) {
        if (f == True || f == False || cube == True) return f;
        int v = var_of(f);
        while (cube != True && var_of(cube) < v) cube = high(cube);
        if (cube == True) return f;
        if (Ref r; lookup(slot_key(OpExists, f, cube, 0), OpExists, f, cube, 0, r)) return r;
        Ref r;
        if (var_of(cube) == v) {
            Ref a = exists(low(f), high(cube));
            r = a == True ? True : lor(a, exists(high(f), high(cube)));
        } else {
            r = make(v, exists(low(f), cube), exists(high(f), cube));
        }
        store(slot_key(OpExists, f, cube, 0), OpExists, f, cube, 0, r);
        return r;
    }

    Ref forall(Ref f, Ref cube) { return lnot(exists(lnot(f), cube)); }

    /// ∃ cube. f ∧ g, without building the conjunction.
    Ref and_exists(Ref f, Ref g, Ref cube) {
        if (f == False || g == False) return False;
        if (f == True && g == True) return True;
        if (f == True) return exists(g, cube);
        if (g == True || f == g) return exists(f, cube);
        if (f > g) std::swap(f, g);
        int v = std::min(var_of(f), var_of(g));
        while (cube != True && var_of(cube) < v) cube = high(cube);
        if (cube == True) return land(f, g);
        if (Ref r; lookup(slot_key(OpRelProd, f, g, cube), OpRelProd, f, g, cube, r)) return r;
        Ref r;
        Ref f0 = cof(f, v, 0), f1 = cof(f, v, 1), g0 = cof(g, v, 0), g1 = cof(g, v, 1);
        if (var_of(cube) == v) {
            Ref a = and_exists(f0, g0, high(cube));
            r = a == True ? True : lor(a, and_exists(f1, g1, high(cube)));
        } else {
            r = make(v, and_exists(f0, g0, cube), and_exists(f1, g1, cube));
        }
        store(slot_key(OpRelProd, f, g, cube), OpRelProd, f, g, cube, r);
        return r;
    }

    /// Rename variables by an order-preserving map (map[v] = new var, or -1 to keep).
    Ref rename(Ref f, const std::vector<int>& map, int map_id) {
        if (f == True || f == False) return f;
        std::uint64_t key = slot_key(OpRename, f, map_id, 0);
        if (Ref r; lookup(key, OpRename, f, map_id, 0, r)) return r;
        int v = var_of(f);
        int nv = map[v] < 0 ? v : map[v];
        Ref r = make_checked(nv, rename(low(f), map, map_id), rename(high(f), map, map_id));
        store(key, OpRename, f, map_id, 0, r);
        return r;
    }

    /// Restrict variable v to a constant.
    Ref restrict_var(Ref f, int v, bool val) {
        std::unordered_map<Ref, Ref> memo;
        return restrict_rec(f, v, val, memo);
    }

    /// One satisfying assignment (values for every variable, unmentioned = 0),
    /// preferring 0 along the path.  Requires f != False.
    std::vector<char> pick_one(Ref f) const {
        std::vector<char> a(nvars_, 0);
        while (f != True) {
            const auto& n = nodes_[f];
            if (n.lo != False) {
                a[n.var] = 0;
                f = n.lo;
            } else {
                a[n.var] = 1;
                f = n.hi;
            }
        }
        return a;
    }

    /// Evaluate under a full assignment.
    bool eval(Ref f, const std::vector<char>& a) const {
        while (f > True) f = a[nodes_[f].var] ? nodes_[f].hi : nodes_[f].lo;
        return f == True;
    }

    /// Conjunction of literals fixing the given variables to the values in a.
    Ref minterm(const std::vector<int>& vars, const std::vector<char>& a) {
        std::vector<int> vs = vars;
        std::sort(vs.begin(), vs.end());
        Ref r = True;
        for (auto it = vs.rbegin(); it != vs.rend(); ++it)
            r = a[*it] ? make(*it, False, r) : make(*it, r, False);
        return r;
    }

private:
    struct NodeRec { int var; Ref lo, hi; };
    struct CacheEntry { std::int32_t op = -1; Ref a = 0, b = 0, c = 0, r = 0; };
    enum : std::int32_t { OpIte = 1, OpExists = 2, OpRelProd = 3, OpRename = 4 };

    int nvars_;
    std::size_t limit_;
    std::vector<NodeRec> nodes_;
    std::vector<Ref> table_;
    std::vector<CacheEntry> cache_;
    std::size_t table_used_ = 0;

    static std::uint64_t hash3(std::uint64_t a, std::uint64_t b, std::uint64_t c) {
        std::uint64_t h = a * 0x9E3779B97F4A7C15ULL;
        h ^= b + 0xC2B2AE3D27D4EB4FULL + (h << 6) + (h >> 2);
        h ^= c * 0x165667B19E3779F9ULL + (h << 6) + (h >> 2);
        return h ^ (h >> 29);
    }
    static std::uint64_t slot_key(std::int32_t op, Ref a, Ref b, Ref c) {
        return hash3(std::uint64_t(op) << 32 | std::uint32_t(a), std::uint32_t(b), std::uint32_t(c));
    }
    bool lookup(std::uint64_t key, std::int32_t op, Ref a, Ref b, Ref c, Ref& r) const {
        const auto& e = cache_[key & (cache_.size() - 1)];
        if (e.op == op && e.a == a && e.b == b && e.c == c) {
            r = e.r;
            return true;
        }
        return false;
    }
    void store(std::uint64_t key, std::int32_t op, Ref a, Ref b, Ref c, Ref r) {
        cache_[key & (cache_.size() - 1)] = {op, a, b, c, r};
    }

    int top3(Ref f, Ref g, Ref h) const {
        return std::min(var_of(f), std::min(var_of(g), var_of(h)));
    }
    Ref cof(Ref f, int v, int val) const {
        if (var_of(f) != v) return f;
        return val ? high(f) : low(f);
    }

    Ref restrict_rec(Ref f, int v, bool val, std::unordered_map<Ref, Ref>& memo) {
        if (f <= True || var_of(f) > v) return f;
        if (var_of(f) == v) return val ? high(f) : low(f);
        auto it = memo.find(f);
        if (it != memo.end()) return it->second;
        Ref r = make(var_of(f), restrict_rec(low(f), v, val, memo), restrict_rec(high(f), v, val, memo));
        memo.emplace(f, r);
        return r;
    }

    Ref make_checked(int v, Ref lo, Ref hi) {
        if (lo == hi) return lo;
        if ((lo > True && var_of(lo) <= v) || (hi > True && var_of(hi) <= v))
            throw std::logic_error("bdd rename broke the variable order");
        return make(v, lo, hi);
    }

    Ref make(int v, Ref lo, Ref hi) {
        if (lo == hi) return lo;
        std::size_t mask = table_.size() - 1;
        std::size_t i = hash3(std::uint64_t(v), std::uint32_t(lo), std::uint32_t(hi)) & mask;
        while (table_[i] >= 0) {
            const auto& n = nodes_[table_[i]];
            if (n.var == v && n.lo == lo && n.hi == hi) return table_[i];
            i = (i + 1) & mask;
        }
        if (nodes_.size() >= limit_) throw BudgetExceeded("bdd node limit reached");
        Ref r = Ref(nodes_.size());
        nodes_.push_back({v, lo, hi});
        table_[i] = r;
        if (++table_used_ * 2 > table_.size()) grow();
        return r;
    }

    void grow() {
        std::vector<Ref> t(table_.size() * 2, -1);
        std::size_t mask = t.size() - 1;
        for (Ref r = 2; r < Ref(nodes_.size()); ++r) {
            const auto& n = nodes_[r];
            std::size_t i = hash3(std::uint64_t(n.var), std::uint32_t(n.lo), std::uint32_t(n.hi)) & mask;
            while (t[i] >= 0) i = (i + 1) & mask;
            t[i] = r;
        }
        table_.swap(t);
        if (cache_.size() < table_.size() && cache_.size() < (std::size_t(1) << 22))
            cache_.assign(cache_.size() * 4, CacheEntry{});
    }
};

} // namespace ctlf

#endif // CTLF_BDD_HPP
