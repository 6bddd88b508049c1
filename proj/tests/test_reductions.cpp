#include "ctlf/reductions.hpp"
#include "ctlf/sat.hpp"

#include "corpus.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace ctlf;

namespace {

Formula P(const std::string& s) { return parse_formula(s); }

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(CTLF_DATA) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Qbf make_qbf(int n, int pattern, Formula matrix) {
    Qbf q;
    for (int i = 0; i < n; ++i) q.prefix.push_back({(pattern >> i) & 1 ? 'E' : 'A', "x" + std::to_string(i + 1)});
    q.matrix = matrix;
    return q;
}

// Plain recursion over configurations with a step bound; no memoization.
std::optional<bool> accepts_naive(const Atm& m, const std::string& q, int head, std::string tape, int steps) {
    if (q == m.accept) return true;
    if (q == m.reject) return false;
    if (steps == 0) return std::nullopt;
    const bool forall = m.universal.count(q) > 0;
    bool any = false, all = true;
    for (auto& t : m.delta.at({q, tape[head - 1]})) {
        int j = head + t.move;
        bool r = false;
        if (j >= 1 && j <= m.space) {
            std::string nt = tape;
            nt[head - 1] = t.write;
            auto sub = accepts_naive(m, t.state, j, nt, steps - 1);
            if (!sub) return std::nullopt;
            r = *sub;
        }
        any = any || r;
        all = all && r;
    }
    return forall ? all : any;
}

std::optional<bool> accepts_naive(const Atm& m, const std::string& input) {
    std::string tape = input + std::string(m.space - input.size(), m.blank);
    return accepts_naive(m, m.init, 1, tape, 40);
}

const char* kUniversal = R"(
state q0 forall
state qa exists
state qr exists
init q0
accept qa
reject qr
input a b
space 1
trans q0 a -> qa a S
trans q0 a -> qr a S
trans q0 b -> qa b S
trans q0 b -> qa a S
trans q0 _ -> qr _ S
)";

const char* kMover = R"(
state q0 exists
state q1 exists
state qa exists
state qr exists
init q0
accept qa
reject qr
input a b
space 2
trans q0 a -> q1 a R
trans q0 b -> qr b S
trans q0 _ -> qr _ S
trans q1 b -> qa b S
trans q1 a -> qr a S
trans q1 _ -> qr _ S
)";

} // namespace

// ── QBF ──

TEST(Qbf, ParseExamples) {
    auto q = parse_qbf("A x E y : (x <-> y)");
    ASSERT_EQ(q.prefix.size(), 2u);
    EXPECT_EQ(q.prefix[0], (std::pair<char, std::string>{'A', "x"}));
    EXPECT_EQ(q.prefix[1], (std::pair<char, std::string>{'E', "y"}));
    EXPECT_EQ(q.matrix, P("x <-> y"));
    EXPECT_NO_THROW(parse_qbf("E x : (x & !x)"));
    try {
        parse_qbf("A x : y");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind, "free-variable");
    }
}

TEST(Qbf, ParseErrors) {
    for (auto [text, kind] : std::vector<std::pair<std::string, std::string>>{
             {"A x x : x", "duplicate"}, {"A x : AX x", "non-prenex"}, {"A x x", "syntax"}, {"x : x", "syntax"}}) {
        try {
            parse_qbf(text);
            FAIL() << text;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind, kind) << text;
        }
    }
}

TEST(Qbf, EvalExamples) {
    EXPECT_TRUE(qbf_eval(parse_qbf("A x E y : (x <-> y)")));
    EXPECT_FALSE(qbf_eval(parse_qbf("E x : (x & !x)")));
    EXPECT_TRUE(qbf_eval(parse_qbf("A x : (x | !x)")));
    EXPECT_FALSE(qbf_eval(parse_qbf("E y A x : (x <-> y)")));
}

TEST(Qbf, EvalMatchesExpansion) {
    for (int n = 1; n <= 3; ++n) {
        auto ms = corpus::qbf_matrices(n, 5);
        for (std::size_t i = 0; i < ms.size(); i += 1 + n * n)
            for (int pat = 0; pat < (1 << n); ++pat) {
                Qbf q = make_qbf(n, pat, ms[i]);
                ASSERT_EQ(qbf_eval(q), oracle::qbf_expand(q.prefix, q.matrix)) << render_qbf(q);
            }
    }
}

TEST(ProofTree, Examples) {
    auto q = parse_qbf("A x E y : (x <-> y)");
    auto t = qbf_proof_tree(q);
    ASSERT_TRUE(t);
    EXPECT_TRUE(validate_proof_tree(q, *t));
    EXPECT_EQ(t->nodes[0].children.size(), 2u);
    for (int c : t->nodes[0].children) EXPECT_EQ(t->nodes[c].children.size(), 1u);

    auto e = parse_qbf("E x : x");
    auto te = qbf_proof_tree(e);
    ASSERT_TRUE(te);
    ASSERT_EQ(te->nodes[0].children.size(), 1u);
    EXPECT_EQ(te->nodes[te->nodes[0].children[0]].values, std::vector<int>{1});

    EXPECT_FALSE(qbf_proof_tree(parse_qbf("A x : x")));
}

TEST(ProofTree, ExistsExactlyForTrueQbfs) {
    for (int n = 1; n <= 3; ++n) {
        auto ms = corpus::qbf_matrices(n, 5);
        for (std::size_t i = 0; i < ms.size(); i += 2 + n * n)
            for (int pat = 0; pat < (1 << n); ++pat) {
                Qbf q = make_qbf(n, pat, ms[i]);
                auto t = qbf_proof_tree(q);
                ASSERT_EQ(t.has_value(), qbf_eval(q)) << render_qbf(q);
                if (t) EXPECT_TRUE(validate_proof_tree(q, *t)) << render_qbf(q);
            }
    }
}

TEST(ProofTree, ValidationRejectsBrokenTrees) {
    auto q = parse_qbf("A x E y : (x <-> y)");
    auto t = *qbf_proof_tree(q);
    auto missing = t;
    missing.nodes[0].children.pop_back();
    EXPECT_FALSE(validate_proof_tree(q, missing));
    auto wrong = t;
    int leaf = wrong.nodes[wrong.nodes[0].children[0]].children[0];
    wrong.nodes[leaf].values[1] = 1 - wrong.nodes[leaf].values[1];
    EXPECT_FALSE(validate_proof_tree(q, wrong));
}

// ── reductions ──

TEST(ReduceAf, Examples) {
    EXPECT_TRUE(sat_general(reduce_qbf_af(parse_qbf("E x : x"))).sat());
    EXPECT_TRUE(sat_general(reduce_qbf_af(parse_qbf("A x : x"))).unsat());
    auto r = sat_general(reduce_qbf_af(parse_qbf("A x : (x | !x)")));
    ASSERT_TRUE(r.sat());
    EXPECT_GE(extent(*r.witness, 64), 2);
}

TEST(ReduceAf, FragmentAndSize) {
    std::size_t prev = 0;
    for (int n = 1; n <= 4; ++n) {
        Qbf q = make_qbf(n, 0b0101, P("x1"));
        Formula f = reduce_qbf_af(q);
        EXPECT_TRUE(in_fragment(f, FragmentSpec{standard_base(), {TOp::F}, 2}));
        std::size_t sz = formula_size(f);
        if (prev) EXPECT_LT(sz - prev, 200u);  // linear growth per variable
        prev = sz;
    }
}

TEST(ReduceAf, NameClash) {
    try {
        reduce_qbf_af(parse_qbf("E s1 : s1"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind, "name-clash");
    }
}

TEST(ReduceAf, AgreesWithEvaluationSample) {
    int checked = 0;
    for (int n = 1; n <= 2; ++n) {
        auto ms = corpus::qbf_matrices(n, 6);
        const std::size_t stride = n == 1 ? 1 : 23;
        for (std::size_t i = 0; i < ms.size(); i += stride)
            for (int pat = 0; pat < (1 << n); ++pat) {
                Qbf q = make_qbf(n, pat, ms[i]);
                auto r = sat_general(reduce_qbf_af(q));
                ASSERT_FALSE(r.unknown());
                ASSERT_EQ(r.sat(), oracle::qbf_expand(q.prefix, q.matrix)) << render_qbf(q);
                ++checked;
            }
    }
    EXPECT_GT(checked, 100);
}

// Output size over |prefix| + |matrix|.  The ratio rises towards the cost
// of one quantified variable (measured up to n = 40: 62.7 and 23.6).
constexpr double kAfSizeFactor = 64.0;
constexpr double kAgSizeFactor = 24.0;

TEST(Reductions, LinearSize) {
    for (int n = 1; n <= 8; ++n) {
        auto ms = corpus::qbf_matrices(std::min(n, 3), 6);
        for (std::size_t i = 0; i < ms.size(); i += 13)
            for (int pat : {0, (1 << n) - 1, 0b10101010 & ((1 << n) - 1)}) {
                Qbf q = make_qbf(n, pat, ms[i]);
                double size = n + formula_size(q.matrix);
                EXPECT_LE(formula_size(reduce_qbf_af(q)), kAfSizeFactor * size) << render_qbf(q);
                EXPECT_LE(formula_size(reduce_qbf_ag(q)), kAgSizeFactor * size) << render_qbf(q);
            }
    }
}

TEST(ReduceAg, Examples) {
    EXPECT_TRUE(sat_general(reduce_qbf_ag(parse_qbf("E x : x"))).sat());
    EXPECT_TRUE(sat_general(reduce_qbf_ag(parse_qbf("A x : x"))).unsat());
    EXPECT_TRUE(sat_general(reduce_qbf_ag(parse_qbf("A x E y : (x <-> y)"))).sat());
    EXPECT_TRUE(in_fragment(reduce_qbf_ag(parse_qbf("A x E y : (x <-> y)")), FragmentSpec{standard_base(), {TOp::G}, 2}));
}

TEST(ReduceAg, AgreesWithEvaluationSample) {
    int checked = 0;
    for (int n = 1; n <= 3; ++n) {
        auto ms = corpus::qbf_matrices(n, 6);
        const std::size_t stride = n == 1 ? 1 : n == 2 ? 7 : 97;
        for (std::size_t i = 0; i < ms.size(); i += stride)
            for (int pat = 0; pat < (1 << n); ++pat) {
                Qbf q = make_qbf(n, pat, ms[i]);
                auto r = sat_general(reduce_qbf_ag(q));
                ASSERT_FALSE(r.unknown());
                ASSERT_EQ(r.sat(), oracle::qbf_expand(q.prefix, q.matrix)) << render_qbf(q);
                ++checked;
            }
    }
    EXPECT_GT(checked, 300);
}

// ── ATM ──

TEST(Atm, ParseDeskMachines) {
    Atm a = parse_atm(slurp("accept.atm"));
    EXPECT_EQ(a.init, "q0");
    EXPECT_EQ(a.accept, "q0");
    EXPECT_EQ(a.space, 1);
    Atm f = parse_atm(slurp("first_a.atm"));
    EXPECT_EQ(f.delta.at({"q0", 'a'}).size(), 2u);
    EXPECT_EQ(f.tape_alphabet(), "_ab");
    EXPECT_EQ(f.sigma(), "ab");
}

TEST(Atm, ParseErrors) {
    for (std::string bad : {
             "init q0\naccept q0\nreject q0\nspace 1\n",                       // accept = reject
             "init q0\naccept qa\nreject qr\n",                               // no space
             "init q0\naccept qa\nreject qr\nspace 1\ninput a\n",             // q0 lacks transitions
             "init q0\naccept qa\nreject qr\nspace 1\ntrans q0 a -> qa a X\n", // bad move
             "bogus\n"}) {
        try {
            parse_atm(bad);
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.kind, "atm") << bad;
        }
    }
}

TEST(Atm, SimulationMatchesNaiveRecursion) {
    for (auto text : {slurp("accept.atm"), slurp("reject.atm"), slurp("first_a.atm"), std::string(kUniversal),
                      std::string(kMover)}) {
        Atm m = parse_atm(text);
        for (std::string in : {"", "a", "b", "aa", "ab", "ba", "bb"}) {
            if (int(in.size()) > m.space) continue;
            auto want = accepts_naive(m, in);
            ASSERT_TRUE(want);
            EXPECT_EQ(simulate_atm(m, in), *want) << text << " on '" << in << "'";
        }
    }
}

TEST(Atm, SimulationExamples) {
    Atm first = parse_atm(slurp("first_a.atm"));
    EXPECT_TRUE(simulate_atm(first, "a"));
    EXPECT_FALSE(simulate_atm(first, "b"));
    Atm uni = parse_atm(kUniversal);
    EXPECT_FALSE(simulate_atm(uni, "a"));
    EXPECT_TRUE(simulate_atm(uni, "b"));
    Atm mover = parse_atm(kMover);
    EXPECT_TRUE(simulate_atm(mover, "ab"));
    EXPECT_FALSE(simulate_atm(mover, "aa"));
}

TEST(Atm, NonHaltingAndAlphabet) {
    Atm loop = parse_atm("init q0\naccept qa\nreject qr\nspace 1\ninput a\ntrans q0 a -> q0 a S\ntrans q0 _ -> qr _ S\n");
    try {
        simulate_atm(loop, "a");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind, "non-halting");
    }
    Atm first = parse_atm(slurp("first_a.atm"));
    try {
        encode_atm(first, "c", AtmVariant::AgAx);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind, "alphabet");
    }
}

TEST(Atm, VariantParsing) {
    EXPECT_EQ(parse_atm_variant("ar"), AtmVariant::Ar);
    EXPECT_THROW(parse_atm_variant("ag"), Error);
    EXPECT_EQ(atm_variant_operators(AtmVariant::AgAf), (std::set<TOp>{TOp::G, TOp::F}));
}

TEST(Atm, EncodingFragmentsAndVerdicts) {
    Atm accept = parse_atm(slurp("accept.atm"));
    Atm reject = parse_atm(slurp("reject.atm"));
    Atm first = parse_atm(slurp("first_a.atm"));
    for (auto v : {AtmVariant::AgAx, AtmVariant::AgAf, AtmVariant::Au, AtmVariant::Ar}) {
        Formula f = encode_atm(first, "a", v);
        EXPECT_TRUE(in_fragment(f, FragmentSpec{standard_base(), atm_variant_operators(v), 2}));
        EXPECT_EQ(parse_formula(render(f)), f);
    }
    EXPECT_TRUE(sat_general(encode_atm(accept, "a", AtmVariant::AgAx)).sat());
    EXPECT_TRUE(sat_general(encode_atm(reject, "b", AtmVariant::AgAx)).unsat());
    EXPECT_TRUE(sat_general(encode_atm(first, "a", AtmVariant::AgAx)).sat());
    EXPECT_TRUE(sat_general(encode_atm(first, "b", AtmVariant::AgAx)).unsat());
    EXPECT_TRUE(sat_general(encode_atm(reject, "a", AtmVariant::Ar)).unsat());
    EXPECT_TRUE(sat_general(encode_atm(accept, "b", AtmVariant::Au)).sat());
}

TEST(Atm, UniversalMachineEncoding) {
    Atm uni = parse_atm(kUniversal);
    for (std::string in : {"a", "b"})
        EXPECT_EQ(sat_general(encode_atm(uni, in, AtmVariant::AgAx)).sat(), simulate_atm(uni, in)) << in;
}

// ── families ──

TEST(Families, FragmentDepthAndSatisfiable) {
    for (auto& name : family_names()) {
        Family fam = generate_family(name, 2, 2, 1);
        EXPECT_TRUE(in_fragment(fam.formula, FragmentSpec{standard_base(), fam.operators, fam.depth})) << name;
        EXPECT_EQ(parse_formula(render(fam.formula)), fam.formula) << name;
        auto r = sat_general(fam.formula);
        EXPECT_TRUE(r.sat()) << name;
    }
    EXPECT_THROW(generate_family("nope"), Error);
    EXPECT_THROW(generate_family("ax", 0), Error);
}

TEST(Families, FlatAxagShape) {
    Formula f = generate_family("flat_axag", 2).formula;
    EXPECT_EQ(temporal_depth(f), 1);
    auto atoms = top_temporal_atoms(f);
    int ex = 0;
    for (auto a : atoms) ex += a->q == PathQ::E && a->op == TOp::X;
    EXPECT_EQ(ex, 2);
}

TEST(Families, CounterWitnessGrowth) {
    auto r = sat_general(generate_family("counter_agax", 2, 2, 1).formula);
    ASSERT_TRUE(r.sat());
    EXPECT_GE(extent(*r.witness, 64), 3);
}

TEST(Families, ExistentialMinimalExtent) {
    Formula f = generate_family("existential", 2).formula;
    auto r = sat_general(f);
    ASSERT_TRUE(r.sat());
    EXPECT_GE(extent(*r.witness), 1);
}
