#include "ctlf/measure.hpp"
#include "ctlf/reductions.hpp"

#include "corpus.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace ctlf;

namespace {

Formula P(const std::string& s) { return parse_formula(s); }

// Least extent over models of at most cap worlds, by explicit enumeration.
std::optional<int> extent_min_explicit(Formula f, int cap) {
    auto props = props_of(f);
    std::optional<int> best;
    for (int k = 1; k <= cap && best != 0; ++k)
        oracle::for_each_structure(k, props, [&](const Model& m) {
            if (!oracle::lasso_check(m, f)) return false;
            int e = oracle::extent_explicit(m);
            if (!best || e < *best) best = e;
            return best == 0;
        });
    return best;
}

} // namespace

TEST(MinSize, Examples) {
    auto r = min_model_size(P("EX p & EX !p"), 4);
    ASSERT_TRUE(r.minimum);
    EXPECT_EQ(*r.minimum, 2);
    EXPECT_TRUE(r.exhaustive);
    ASSERT_TRUE(r.witness);
    EXPECT_TRUE(model_check(*r.witness, P("EX p & EX !p")));

    EXPECT_EQ(min_model_size(P("p"), 3).minimum, 1);
    EXPECT_EQ(min_model_size(P("EX p & EX q & AX(p <-> !q)"), 3).minimum, 2);
    EXPECT_EQ(min_model_size(P("p & EX !p & AX AX p & EX EX !p"), 4).minimum, std::nullopt);
}

TEST(MinSize, UnsatisfiableAndPropositional) {
    auto r = min_model_size(P("p & !p"), 3);
    EXPECT_FALSE(r.minimum);
    EXPECT_TRUE(r.exhaustive);
    auto t = min_model_size(P("AG p & EF !p"), 3);
    EXPECT_FALSE(t.minimum);
    EXPECT_FALSE(t.exhaustive);
}

TEST(MinSize, ExistentialFamilyNeedsThreeWorlds) {
    auto r = min_model_size(generate_family("existential", 2).formula, 4);
    ASSERT_TRUE(r.minimum);
    EXPECT_EQ(*r.minimum, 3);
}

TEST(MinSize, BudgetReported) {
    BruteOptions opt;
    opt.budget.nodes = 20;
    auto r = min_model_size(P("A[p U (q & EX r)] & EG !q"), 3, opt);
    EXPECT_TRUE(r.budget_exceeded);
    EXPECT_FALSE(r.reason.empty());
    EXPECT_FALSE(r.minimum);
}

TEST(MinSize, SpaceCeiling) {
    try {
        min_model_size(P("p & q & r & s & t & u"), 9);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind, "budget");
    }
}

TEST(MinSize, MatchesExplicitEnumeration) {
    auto all = corpus::flatten(corpus::enumerate(5, {"p", "q"}, corpus::ops_for({TOp::X, TOp::F, TOp::U})), true);
    int n = 0;
    for (std::size_t i = 0; i < all.size(); i += 2, ++n) {
        Formula f = all[i];
        auto r = min_model_size(f, 3);
        ASSERT_FALSE(r.budget_exceeded);
        EXPECT_EQ(r.minimum, oracle::min_size_explicit(f, 3)) << render(f);
    }
    EXPECT_GT(n, 500);
}

TEST(MinExtent, Examples) {
    EXPECT_EQ(min_model_extent(P("p & EX !p"), 3).minimum, 1);
    EXPECT_EQ(min_model_extent(P("p & q & AX(p & !q) & EF(!p & q)"), 4).minimum, 2);
    auto ag = min_model_extent(P("AG p"), 3);
    EXPECT_EQ(ag.minimum, 0);
    EXPECT_TRUE(ag.exhaustive);
    ASSERT_TRUE(ag.witness);
    EXPECT_EQ(extent(*ag.witness), 0);
}

TEST(MinExtent, CertificationRule) {
    auto one = min_model_extent(P("p & EX !p"), 3);
    EXPECT_TRUE(one.exhaustive);
    auto two = min_model_extent(P("p & q & AX(p & !q) & EF(!p & q)"), 4);
    EXPECT_FALSE(two.exhaustive);
}

TEST(MinExtent, WitnessAttainsMinimum) {
    for (auto text : {"EX p & EX !p", "p & EX !p & EX EX p", "AF p & !p", "E[p U q] & !q & AX !p"}) {
        auto r = min_model_extent(P(text), 4);
        ASSERT_TRUE(r.minimum) << text;
        ASSERT_TRUE(r.witness) << text;
        EXPECT_EQ(extent(*r.witness), *r.minimum) << text;
        EXPECT_TRUE(model_check(*r.witness, P(text))) << text;
    }
}

TEST(MinExtent, MatchesExplicitEnumeration) {
    auto all = corpus::flatten(corpus::enumerate(6, {"p"}, corpus::ops_for({TOp::X, TOp::G})), false);
    int n = 0;
    for (std::size_t i = 0; i < all.size(); i += 3, ++n) {
        Formula f = all[i];
        auto r = min_model_extent(f, 3);
        ASSERT_FALSE(r.budget_exceeded);
        EXPECT_EQ(r.minimum, extent_min_explicit(f, 3)) << render(f);
    }
    EXPECT_GT(n, 100);
}

TEST(MinExtent, NeverAboveSizeMinusOne) {
    corpus::RandomFormulas gen(17, {"p", "q"}, corpus::ops_for({TOp::X, TOp::F, TOp::G, TOp::U}));
    for (int i = 0; i < 60; ++i) {
        Formula f = gen(3 + int(gen.pick(6)));
        auto s = min_model_size(f, 3);
        auto e = min_model_extent(f, 3);
        ASSERT_EQ(s.minimum.has_value(), e.minimum.has_value()) << render(f);
        if (s.minimum) EXPECT_LE(*e.minimum, *s.minimum - 1) << render(f);
    }
}

TEST(MinSize, FlatAxagHasTwoWorldModel) {
    Formula f = generate_family("flat_axag", 2).formula;
    auto r = min_model_size(f, 3);
    ASSERT_TRUE(r.minimum);
    EXPECT_EQ(*r.minimum, 2);
    EXPECT_EQ(oracle::min_size_explicit(f, 2), 2);
}
