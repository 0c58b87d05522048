#include "oracles.hpp"

#include "bellman/errors.hpp"
#include "bellman/examples.hpp"
#include "bellman/finite_core.hpp"
#include "bellman/rational.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bellman;
using namespace bellman::finite;

namespace {

Rational q(long p, long d = 1) { return fraction(p, d); }

RandomVariable rv(std::initializer_list<Rational> v) { return RandomVariable(std::vector<Rational>(v)); }

ProbMeasure random_measure(std::mt19937_64& rng, std::size_t n, bool allow_null) {
    std::vector<Rational> w(n);
    Rational total = 0;
    for (auto& v : w) {
        v = q(static_cast<long>(rng() % 5) + (allow_null ? 0 : 1));
        total += v;
    }
    if (total == 0) {
        w[0] = 1;
        total = 1;
    }
    for (auto& v : w) v /= total;
    return ProbMeasure(w);
}

RandomVariable random_rv(std::mt19937_64& rng, std::size_t n) {
    std::vector<Rational> v(n);
    for (auto& x : v) x = q(static_cast<long>(rng() % 9) - 4, static_cast<long>(rng() % 3) + 1);
    return RandomVariable(v);
}

SigmaField random_field(std::mt19937_64& rng, std::size_t n) {
    std::vector<std::size_t> labels(n);
    const auto k = rng() % n + 1;
    for (auto& l : labels) l = rng() % k;
    return SigmaField::from_labels(labels);
}

}  // namespace

TEST(Rational, ParsesExactFractions) {
    EXPECT_EQ(parse_rational("1/6"), q(1, 6));
    EXPECT_EQ(parse_rational("-2/4"), q(-1, 2));
    EXPECT_EQ(parse_rational("7"), q(7));
    EXPECT_EQ(to_string(q(14, 12)), "7/6");
}

TEST(Rational, RejectsFloatingPointAndJunk) {
    for (const char* bad : {"0.5", "1e3", "1/0", "", "/3", "1/", "abc", "1/2/3"}) {
        EXPECT_THROW(parse_rational(bad), ParseError) << bad;
    }
}

TEST(ProbMeasure, RejectsWeightsNotSummingToOne) {
    EXPECT_THROW(ProbMeasure({q(1, 2), q(1, 3)}), std::exception);
    EXPECT_THROW(ProbMeasure({q(3, 2), q(-1, 2)}), std::exception);
    EXPECT_NO_THROW(ProbMeasure({q(1, 2), q(0), q(1, 2)}));
}

TEST(SigmaField, CanonicalLabellingMakesEqualityStructural) {
    const std::vector<std::size_t> a{5, 5, 2, 9};
    const std::vector<std::size_t> b{0, 0, 7, 1};
    EXPECT_EQ(SigmaField::from_labels(a), SigmaField::from_labels(b));
    EXPECT_EQ(SigmaField::from_labels(a).atom_count(), 3u);
    EXPECT_TRUE(SigmaField::trivial(4).is_coarser_than(SigmaField::from_labels(a)));
    EXPECT_TRUE(SigmaField::from_labels(a).is_coarser_than(SigmaField::discrete(4)));
    EXPECT_FALSE(SigmaField::discrete(4).is_coarser_than(SigmaField::from_labels(a)));
}

TEST(SigmaField, FromBlocksRejectsOverlapAndGaps) {
    EXPECT_THROW(SigmaField::from_blocks(3, {{0, 1}, {1, 2}}), std::exception);
    EXPECT_THROW(SigmaField::from_blocks(3, {{0, 1}}), std::exception);
    EXPECT_THROW(SigmaField::from_blocks(3, {{0, 1}, {}, {2}}), std::exception);
}

TEST(SigmaField, EnumeratesAllAtomUnions) {
    const auto g = SigmaField::from_blocks(5, {{0, 3}, {1}, {2, 4}});
    const auto events = enumerate_events(g);
    ASSERT_EQ(events.size(), 8u);
    for (const auto& e : events) {
        EXPECT_TRUE(g.contains(e));
        EXPECT_TRUE(oracle::measurable(e, g.labelling()));
    }
}

TEST(SigmaField, GeneratedAndRefinedFieldsMatchLevelSets) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = rng() % 7 + 1;
        std::vector<RandomVariable> vars{random_rv(rng, n), random_rv(rng, n)};
        const auto g = sigma_generated(SampleSpace::indexed(n), vars);
        oracle::Paths rows(n);
        for (std::size_t w = 0; w < n; ++w) rows[w] = {vars[0][w], vars[1][w]};
        EXPECT_EQ(g.labelling(), oracle::canonical(oracle::prefix_labels(rows, 1)));
        EXPECT_TRUE(g.measures(vars[0]));

        const auto a = random_field(rng, n);
        const auto b = random_field(rng, n);
        const auto r = refine(a, b);
        std::vector<std::size_t> pairs(n);
        for (std::size_t w = 0; w < n; ++w) pairs[w] = a.atom_of(w) * 100 + b.atom_of(w);
        EXPECT_EQ(r.labelling(), oracle::canonical(pairs));
    }
}

TEST(CondExp, MatchesAtomAveragesOnRandomInputs) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = rng() % 8 + 1;
        const auto mu = random_measure(rng, n, true);
        const auto x = random_rv(rng, n);
        const auto g = random_field(rng, n);
        const auto got = cond_exp(mu, x, g);
        EXPECT_EQ(got.values(), oracle::cond_exp(mu.weights(), x.values(), g.labelling()));
        // tower property and expectation preservation
        EXPECT_EQ(mu.expectation(got), mu.expectation(x));
        EXPECT_TRUE(g.measures(got));
    }
}

TEST(EssSup, IsPointwiseMaximumAndAsComparisonsIgnoreNullOutcomes) {
    const ProbMeasure mu({q(1, 2), q(0), q(1, 2)});
    const std::vector<RandomVariable> family{rv({1, 5, 0}), rv({0, 9, 2})};
    EXPECT_EQ(ess_sup(mu, family), rv({1, 9, 2}));
    EXPECT_TRUE(as_equal(mu, rv({1, 0, 2}), rv({1, 7, 2})));
    EXPECT_FALSE(as_equal(mu, rv({1, 0, 2}), rv({1, 0, 3})));
    EXPECT_TRUE(as_less_equal(mu, rv({1, 100, 2}), rv({1, 0, 2})));
}

TEST(Completion, NullOutcomesBecomeAtomsAndFieldsCompareModuloNull) {
    const ProbMeasure mu({q(1, 2), q(0), q(1, 2)});
    const auto g = SigmaField::from_blocks(3, {{0, 1}, {2}});
    EXPECT_EQ(complete(g, mu), SigmaField::discrete(3));
    EXPECT_TRUE(as_equal_fields(mu, SigmaField::from_blocks(3, {{0, 1}, {2}}), SigmaField::from_blocks(3, {{0}, {1, 2}})));
    EXPECT_FALSE(as_equal_fields(mu, SigmaField::trivial(3), SigmaField::discrete(3)));
}

TEST(MeasuresAgree, ComparesAtomMasses) {
    const ProbMeasure p({q(1, 4), q(1, 4), q(1, 2)});
    const ProbMeasure r({q(1, 2), q(0), q(1, 2)});
    EXPECT_TRUE(measures_agree_on(p, r, SigmaField::from_blocks(3, {{0, 1}, {2}})));
    EXPECT_FALSE(measures_agree_on(p, r, SigmaField::discrete(3)));
}

TEST(UpwardsLattice, IndicatorsOfComplementsNeedAnUpperBound) {
    const auto mu = ProbMeasure::uniform(2);
    std::vector<RandomVariable> family{rv({1, 0}), rv({0, 1})};
    EXPECT_FALSE(has_upwards_lattice_property(mu, family, 0, std::nullopt));
    // eps large enough closes the gap
    EXPECT_TRUE(has_upwards_lattice_property(mu, family, 1, std::nullopt));
    family.push_back(rv({1, 1}));
    EXPECT_TRUE(has_upwards_lattice_property(mu, family, 0, std::nullopt));
}

TEST(UpwardsLattice, TruncationAtMCanSupplyTheBound) {
    const auto mu = ProbMeasure::uniform(2);
    const std::vector<RandomVariable> family{rv({2, 0}), rv({0, 2}), rv({1, 1})};
    EXPECT_FALSE(has_upwards_lattice_property(mu, family, 0, std::nullopt));
    EXPECT_TRUE(has_upwards_lattice_property(mu, family, 0, q(1)));
}

TEST(EssSupExchange, HoldsForTheBoxPickingClassOnSigmaY1) {
    const auto bp = examples::build_box_picking();
    const auto& sys = bp.consistent;
    const auto one = *sys.find_time("1");
    std::vector<RandomVariable> family;
    const auto& mu = sys.controls[bp.c_star].measure;
    for (auto d : sys.classes[one].members(bp.c_star)) {
        family.push_back(cond_exp(mu, sys.controls[d].payoff, sys.controls[d].filtration.stage(1)));
    }
    const auto sigma_y1 = SigmaField::from_blocks(4, {{0, 1}, {2, 3}});
    EXPECT_TRUE(esssup_exchange_holds(mu, family, sigma_y1, 0, q(1000)));
}

TEST(EssSupExchange, FailsWithoutTheLatticeProperty) {
    const auto mu = ProbMeasure::uniform(2);
    const std::vector<RandomVariable> family{rv({1, 0}), rv({0, 1})};
    // E[max] = 1 but max E = 1/2
    EXPECT_FALSE(esssup_exchange_holds(mu, family, SigmaField::trivial(2), 0, q(1)));
    EXPECT_THROW(esssup_exchange_holds(mu, family, SigmaField::trivial(2), -1, q(1)), PreconditionError);
}
