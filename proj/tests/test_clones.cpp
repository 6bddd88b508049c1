#include "ctlf/clones.hpp"
#include "ctlf/sat.hpp"

#include "corpus.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace ctlf;

namespace {

Formula P(const std::string& s, const Base& b = standard_base()) { return parse_formula(s, b); }

Base base_of(std::initializer_list<TruthTable> ts) { return Base(ts); }

// Naive closure over explicit truth vectors: start from the projections and
// apply every base function to every tuple until nothing new appears.
std::set<std::vector<bool>> naive_slice(const Base& b, int k) {
    const std::size_t rows = std::size_t(1) << k;
    std::set<std::vector<bool>> s;
    for (int i = 0; i < k; ++i) {
        std::vector<bool> v(rows);
        for (std::size_t r = 0; r < rows; ++r) v[r] = (r >> (k - 1 - i)) & 1;
        s.insert(v);
    }
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<std::vector<bool>> cur(s.begin(), s.end());
        for (auto& t : b.functions()) {
            std::vector<std::size_t> pick(t.arity, 0);
            while (true) {
                std::vector<bool> v(rows);
                for (std::size_t r = 0; r < rows; ++r) {
                    std::vector<bool> in;
                    for (int a = 0; a < t.arity; ++a) in.push_back(cur[pick[a]][r]);
                    v[r] = t.eval(in);
                }
                grew |= s.insert(v).second;
                int a = 0;
                while (a < t.arity && ++pick[a] == cur.size()) pick[a++] = 0;
                if (a == t.arity) break;
            }
        }
    }
    return s;
}

std::vector<bool> as_vector(const TruthTable& t) { return {t.out.begin(), t.out.end()}; }

std::vector<TruthTable> all_binary() {
    std::vector<TruthTable> v;
    for (unsigned m = 0; m < 16; ++m) {
        std::string bits;
        for (int i = 3; i >= 0; --i) bits.push_back(((m >> i) & 1) ? '1' : '0');
        v.push_back(TruthTable::from_bits("f" + bits, 2, bits));
    }
    return v;
}

bool has_top_constant(Formula f) {
    for (auto g : subformulas(f))
        if (g->is_apply() && g->table.arity == 0 && g->table.at(0)) return true;
    return false;
}

} // namespace

TEST(Monotone, Examples) {
    EXPECT_TRUE(is_monotone(tables::and2()));
    EXPECT_FALSE(is_monotone(tables::imp2()));
    EXPECT_FALSE(is_monotone(tables::not1()));
    EXPECT_TRUE(is_monotone(tables::top0()));
}

TEST(OneSeparating, Examples) {
    EXPECT_EQ(one_separating_argument(tables::nimpl2()), 0);
    EXPECT_FALSE(is_one_separating(tables::or2()));
    EXPECT_TRUE(is_one_separating(tables::and2()));
    EXPECT_FALSE(is_one_separating(tables::top0()));
}

TEST(CloneSlice, Examples) {
    auto mono = clone_slice(base_of({tables::and2(), tables::or2()}), 1);
    EXPECT_EQ(mono.size(), 1u);
    EXPECT_FALSE(mono.contains(tables::not1()));
    EXPECT_TRUE(clone_slice(base_of({tables::nimpl2()}), 2).contains(tables::and2()));
    EXPECT_EQ(clone_slice(base_of({tables::and2(), tables::not1()}), 2).size(), 16u);
    try {
        clone_slice(standard_base(), 4);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind, "cap");
    }
}

TEST(CloneSlice, MatchesNaiveClosure) {
    auto bins = all_binary();
    for (std::size_t i = 0; i < bins.size(); i += 3)
        for (int k = 1; k <= 3; ++k) {
            Base b = base_of({bins[i]});
            if (i % 2) b.add(tables::not1());
            auto slice = clone_slice(b, k);
            auto naive = naive_slice(b, k);
            ASSERT_EQ(slice.size(), naive.size()) << bins[i].bits() << " k=" << k;
            for (auto& t : slice.tables()) EXPECT_TRUE(naive.count(as_vector(t)));
        }
}

TEST(CloneSlice, MonotoneInBase) {
    auto bins = all_binary();
    for (std::size_t i = 0; i < bins.size(); ++i) {
        Base small = base_of({bins[i]});
        Base large = base_of({bins[i], bins[(i * 7 + 3) % 16]});
        for (int k = 1; k <= 2; ++k) {
            auto a = clone_slice(small, k), b = clone_slice(large, k);
            EXPECT_TRUE(std::includes(b.masks.begin(), b.masks.end(), a.masks.begin(), a.masks.end()));
        }
    }
}

TEST(CloneSlice, OneSeparatingClosure) {
    for (auto& f : all_binary()) {
        if (!is_one_separating(f)) continue;
        for (int k = 1; k <= 3; ++k)
            for (auto& t : clone_slice(base_of({f}), k).tables()) EXPECT_TRUE(is_one_separating(t)) << f.bits();
    }
}

TEST(CloneGenerates, Examples) {
    EXPECT_TRUE(clone_generates(base_of({tables::nimpl2()}), tables::and2()));
    EXPECT_FALSE(clone_generates(base_of({tables::and2(), tables::or2()}), tables::not1()));
    EXPECT_TRUE(clone_generates(base_of({tables::and2(), tables::not1()}), tables::xor2()));
}

TEST(ShortRepresentation, Examples) {
    auto a = short_representation(base_of({tables::not1(), tables::or2()}), tables::and2());
    ASSERT_TRUE(a);
    EXPECT_EQ(render_call(a->expr), "not(or(not(x), not(y)))");
    EXPECT_FALSE(short_representation(standard_base(), tables::xor2()));
    auto c = short_representation(base_of({tables::and2()}), tables::and2());
    ASSERT_TRUE(c);
    EXPECT_EQ(render_call(c->expr), "and(x, y)");
}

TEST(ShortRepresentation, ReadOnceAndCorrect) {
    Base b = base_of({tables::nimpl2(), tables::top0()});
    for (auto& f : {tables::and2(), tables::or2(), tables::not1(), tables::nimpl2()}) {
        auto r = short_representation(b, f);
        if (!r) continue;
        EXPECT_EQ(prop_occurrences(r->expr), f.arity) << f.name;
        for (std::size_t row = 0; row < f.out.size(); ++row) {
            std::map<std::string, bool> v;
            for (int i = 0; i < f.arity; ++i) v[r->vars[i]] = (row >> (f.arity - 1 - i)) & 1;
            EXPECT_EQ(oracle::eval_prop(r->expr, v), f.at(row)) << f.name;
        }
    }
}

TEST(BaseTranslate, Examples) {
    Base target = base_of({tables::not1(), tables::or2()});
    EXPECT_EQ(render(base_translate(P("p & q"), target)), "!(!p | !q)");
    EXPECT_EQ(base_translate(P("AG p"), target), P("AG p"));
    try {
        base_translate(P("p & q"), base_of({tables::and2(), tables::or2()}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind, "incomplete");
    }
}

TEST(BaseTranslate, EquivalentOnSmallStructures) {
    Base target = base_of({tables::nimpl2(), tables::not1()});
    corpus::RandomFormulas gen(61, {"p", "q"}, corpus::ops_for({TOp::X, TOp::F, TOp::G, TOp::U, TOp::R}));
    std::vector<std::pair<Formula, Formula>> pairs;
    for (int i = 0; i < 40; ++i) {
        Formula f = gen(3 + i % 8);
        Formula g = base_translate(f, target);
        EXPECT_TRUE(over_base(g, target));
        pairs.push_back({f, g});
    }
    for (int k = 1; k <= 3; ++k) {
        long n = 0;
        oracle::for_each_structure(k, {"p", "q"}, [&](const Model& m) {
            if (n++ % 11) return false;
            for (auto& [f, g] : pairs) EXPECT_EQ(truth_set(m, f), truth_set(m, g)) << render(f);
            return false;
        });
    }
}

TEST(PseudoMonotone, Examples) {
    EXPECT_TRUE(is_pseudo_monotone(P("AG(EX !p & !q)")));
    EXPECT_FALSE(is_pseudo_monotone(P("AG(!AX p & !q)")));
    EXPECT_FALSE(is_pseudo_monotone(P("!EF(AX p | q)")));
}

TEST(RemoveTop, Examples) {
    Base b = base_of({tables::and2(), tables::top0()});
    Formula f = remove_top(P("AG top", b), b, "t");
    EXPECT_EQ(render_call(f), "and(AG(and(t, t)), t)");
    EXPECT_TRUE(sat_general(f).sat());

    Base s = standard_base();
    s.add(tables::top0());
    try {
        remove_top(P("EX top & !AX top", s), s, "t");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind, "not-pseudo-monotone");
    }
    EXPECT_EQ(render_call(remove_top(P("p", b), b, "t")), "and(p, t)");
    EXPECT_THROW(remove_top(P("t", b), b, "t"), Error);
}

TEST(S1Transform, Examples) {
    Base target = base_of({tables::nimpl2()});
    Formula a = s1_transform(P("p & !q"), target);
    EXPECT_TRUE(over_base(a, target));
    EXPECT_TRUE(sat_general(a).sat());
    Formula b = s1_transform(P("AF p"), target);
    EXPECT_TRUE(in_fragment(b, FragmentSpec{target, {TOp::F}, std::nullopt}));
    EXPECT_EQ(sat_general(b).status, sat_general(P("AF p")).status);
    EXPECT_TRUE(sat_general(s1_transform(P("p & !p"), target)).unsat());
    try {
        s1_transform(P("p"), base_of({tables::or2()}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind, "not-s1");
    }
}

// Size counts distinct subformulas: representations that repeat a placeholder
// make the tree size exponential, the shared size stays linear.  Measured
// maximum over 20000 random inputs (3 props, size <= 10, depth <= 2).
constexpr double kS1SizeFactor = 4.0;

std::size_t dag_size(Formula f) { return subformulas(f).size(); }

TEST(S1Transform, PreservesSatisfiabilityAndLinearSize) {
    Base target = base_of({tables::nimpl2()});
    corpus::RandomFormulas gen(67, {"p", "q", "r"}, corpus::ops_for({TOp::X, TOp::F, TOp::G, TOp::U, TOp::R}));
    int done = 0;
    while (done < 80) {
        Formula f = gen(3 + done % 8);
        if (temporal_depth(f) > 2) continue;
        Formula g = s1_transform(f, target);
        EXPECT_TRUE(over_base(g, target));
        EXPECT_FALSE(has_top_constant(g));
        EXPECT_LE(dag_size(g), kS1SizeFactor * dag_size(f)) << render(f);
        EXPECT_EQ(sat_general(g).status, sat_general(f).status) << render(f);
        ++done;
    }
}

TEST(AgTranslate, Examples) {
    Formula p = P("p");
    Formula x = prop(ag_proposition_name(p));
    EXPECT_EQ(ag_translate(p), land(x, AG(liff(x, p))));
    EXPECT_TRUE(sat_general(ag_translate(p)).sat());

    Formula ff = P("AF AF p");
    Formula t = ag_translate(ff);
    EXPECT_LE(temporal_depth(t), 2);
    EXPECT_EQ(sat_general(t).status, sat_general(ff).status);
    EXPECT_TRUE(sat_general(ag_translate(P("p & !p"))).unsat());
}

TEST(AgTranslate, DepthFragmentAndSatisfiability) {
    Base b = standard_base();
    b.add(tables::xor2());
    b.add(tables::nimpl2());
    corpus::RandomFormulas gen(71, {"p", "q", "r"}, corpus::ops_for({TOp::X, TOp::F, TOp::U}));
    for (int i = 0; i < 60; ++i) {
        Formula f = gen(3 + i % 8);
        if (i % 3 == 0) f = apply(tables::xor2(), {f, gen(3)});
        Formula t = ag_translate(f);
        EXPECT_LE(temporal_depth(t), 2);
        auto ops = operators_used(f);
        ops.insert(TOp::G);
        EXPECT_TRUE(in_fragment(t, FragmentSpec{standard_base(), ops, 2})) << render(f);
        EXPECT_EQ(sat_general(t).status, sat_general(f).status) << render(f);
    }
}
