#include "oracles.hpp"

#include "bellman/control_engine.hpp"
#include "bellman/errors.hpp"
#include "bellman/examples.hpp"
#include "bellman/process_campaign.hpp"
#include "bellman/random_systems.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bellman;
using namespace bellman::control;
using bellman::finite::Filtration;
using bellman::finite::ProbMeasure;
using bellman::finite::RandomVariable;
using bellman::finite::SigmaField;

namespace {

Rational q(long p, long d = 1) { return fraction(p, d); }

std::vector<Rational> vals(std::initializer_list<Rational> v) { return std::vector<Rational>(v); }

std::size_t time_index(const FiniteControlSystem& sys, const std::string& id) {
    const auto s = sys.find_time(id);
    if (!s) throw std::runtime_error("no time " + id);
    return *s;
}

/// Omega = {0,1,2,3} uniform, G at time 1 = {{0,1},{2,3}}; payoffs (2,0,0,0),
/// (0,0,2,0) and (1,0,1,0). Truncating at M = 1 before conditioning keeps the
/// glued raw payoffs dominated, while the conditioned ones are not.
FiniteControlSystem truncation_example() {
    FiniteControlSystem sys;
    sys.space = finite::SampleSpace::indexed(4);
    sys.horizon = 1;
    const Filtration f({SigmaField::trivial(4), SigmaField::from_blocks(4, {{0, 1}, {2, 3}})});
    const auto mu = ProbMeasure::uniform(4);
    sys.controls = {
        Control{"d", f, mu, RandomVariable(vals({2, 0, 0, 0})), std::nullopt},
        Control{"e", f, mu, RandomVariable(vals({0, 0, 2, 0})), std::nullopt},
        Control{"g", f, mu, RandomVariable(vals({1, 0, 1, 0})), std::nullopt},
    };
    sys.times.push_back(deterministic_time("1", 3, 4, 1));
    sys.classes.push_back(ClassTable::from_labels({0, 0, 0}));
    return sys;
}

}  // namespace

// ------------------------------------------------------------------ box picking

TEST(BoxPicking, ValueAndOptimalControlMatchEnumeration) {
    const auto expected = oracle::box_picking();
    EXPECT_EQ(expected.value, q(7, 6));
    const auto bp = examples::build_box_picking();
    ASSERT_EQ(bp.consistent.control_count(), 8u);
    const auto sol = solve(bp.consistent);
    ASSERT_TRUE(sol.value);
    EXPECT_EQ(*sol.value, expected.value);
    ASSERT_EQ(sol.optimal.size(), 1u);
    EXPECT_EQ(sol.optimal[0], bp.c_star);
    EXPECT_EQ(bp.consistent.controls[bp.c_star].id, "1-21");
}

TEST(BoxPicking, BellmanValueAtTimeOneMatchesEnumeration) {
    const auto expected = oracle::box_picking();
    const auto bp = examples::build_box_picking();
    const auto tables = compute_tables(bp.consistent);
    const auto one = time_index(bp.consistent, "1");
    EXPECT_EQ(tables.value[one][bp.c_star].values(), expected.v_hat_1);
    const auto classical = compute_tables(bp.classical);
    EXPECT_EQ(classical.value[time_index(bp.classical, "1")][bp.c_star].values(), expected.w_star_1);
}

TEST(BoxPicking, ConsistentVariantSatisfiesEveryPrinciple) {
    const auto bp = examples::build_box_picking();
    const auto& sys = bp.consistent;
    EXPECT_TRUE(validate(sys).passed());
    const auto v = verify_bellman(sys, compute_tables(sys));
    EXPECT_TRUE(v.b1.passed);
    EXPECT_TRUE(v.b2.passed);
    EXPECT_TRUE(v.b3.passed);
    EXPECT_TRUE(v.b4.passed);
    EXPECT_TRUE(v.b5.passed);
    EXPECT_EQ(v.chain, (std::vector<std::string>{"0", "1", "2", "inf"}));
}

TEST(BoxPicking, ClassicalVariantBreaksTheSupermartingaleProperty) {
    const auto expected = oracle::box_picking();
    const auto bp = examples::build_box_picking();
    const auto v = verify_bellman(bp.classical, compute_tables(bp.classical));
    ASSERT_FALSE(v.b1.passed);
    const auto& w = v.b1.witnesses.front();
    EXPECT_EQ(w.time, "0");
    EXPECT_EQ(w.other_time, "1");
    EXPECT_EQ(w.lhs, to_string(expected.classical_value));
    EXPECT_EQ(w.lhs, "4/3");
    EXPECT_EQ(w.rhs, "7/6");
}

TEST(BoxPicking, EveryClassHasTheLatticeProperty) {
    const auto bp = examples::build_box_picking();
    const auto& sys = bp.consistent;
    const auto tables = compute_tables(sys);
    for (std::size_t s = 0; s < sys.time_count(); ++s) {
        for (std::size_t c = 0; c < sys.control_count(); ++c) {
            const auto v = lattice_check(sys, tables, c, s, 0, std::nullopt);
            EXPECT_TRUE(v.c1 && v.c2 && v.c3) << sys.controls[c].id << " at " << sys.times[s].id;
            EXPECT_TRUE(v.implication_ok);
        }
    }
}

TEST(BoxPicking, PayoffSystemAgreesOnReachingEvents) {
    const auto bp = examples::build_box_picking();
    const auto tables = compute_tables(bp.consistent);
    const auto v = payoff_system_check(bp.consistent, tables, default_payoff_cases(bp.consistent));
    EXPECT_TRUE(v.passed());
    EXPECT_GT(v.cases, 0u);
}

TEST(BoxPicking, ConsistencyTheoremOnSigmaY1) {
    const auto bp = examples::build_box_picking();
    const auto tables = compute_tables(bp.consistent);
    const auto one = time_index(bp.consistent, "1");
    const auto v = consistency_theorem_check(bp.consistent, tables, bp.c_star, one,
                                             SigmaField::from_blocks(4, {{0, 1}, {2, 3}}));
    EXPECT_TRUE(v.conditional);
    EXPECT_TRUE(v.expectation);
    EXPECT_THROW(consistency_theorem_check(bp.consistent, tables, bp.c_star, one, SigmaField::discrete(4)),
                 PreconditionError);
}

// -------------------------------------------------------------------- lattice

TEST(Lattice, FiniteCapAllowsGluedRawPayoffsWithoutGluedConditionalOnes) {
    const auto sys = truncation_example();
    const auto tables = compute_tables(sys);
    const auto v = lattice_check(sys, tables, 0, 0, 0, q(1));
    EXPECT_TRUE(v.c1);
    EXPECT_FALSE(v.c2);
    EXPECT_TRUE(v.implication_ok);
    // without the cap the raw gluing already fails
    const auto uncapped = lattice_check(sys, tables, 0, 0, 0, std::nullopt);
    EXPECT_FALSE(uncapped.c1);
    EXPECT_TRUE(uncapped.implication_ok);
}

TEST(Lattice, RejectsNegativeEpsAndNonPositiveCap) {
    const auto sys = truncation_example();
    const auto tables = compute_tables(sys);
    EXPECT_THROW(lattice_check(sys, tables, 0, 0, -1, std::nullopt), PreconditionError);
    EXPECT_THROW(lattice_check(sys, tables, 0, 0, 0, q(0)), PreconditionError);
}

// -------------------------------------------------------------- optimal stopping

TEST(OptimalStopping, BellmanValueOfTheRunningControlIsTheSnellEnvelope) {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = rng() % 4 + 2;
        const std::size_t h = rng() % 3 + 1;
        auto rows = process::random_process(rng, n, h, 4).rows();
        for (auto& row : rows) row[0] = rows[0][0];
        const process::DiscreteProcess x(rows);
        std::vector<Rational> w(n);
        Rational total = 0;
        for (auto& v : w) total += (v = q(static_cast<long>(rng() % 3)));
        if (total == 0) total = w[0] = 1;
        for (auto& v : w) v /= total;
        const ProbMeasure p(w);

        const auto sys = examples::build_optimal_stopping(x, p);
        const auto f = process::natural_filtration(x);
        std::vector<oracle::Labels> stages;
        for (const auto& g : f.stages()) stages.push_back(g.labelling());
        const auto expected = oracle::snell(rows, stages, w);

        const auto tables = compute_tables(sys.system);
        for (std::size_t t = 0; t <= h; ++t) {
            const auto s = time_index(sys.system, std::to_string(t));
            EXPECT_TRUE(as_equal(p, tables.value[s][sys.never_stopped], RandomVariable(expected[t])));
        }
        EXPECT_TRUE(examples::snell_crosscheck(sys, tables));
        EXPECT_EQ(*solve(sys.system).value, expected[0][0]);
        const auto env = examples::snell_envelope(x, f, p);
        for (std::size_t t = 0; t <= h; ++t) EXPECT_TRUE(as_equal(p, env[t], RandomVariable(expected[t])));
    }
}

TEST(OptimalStopping, SmallInstancesValidateAndSatisfyBellmansPrinciple) {
    const process::DiscreteProcess x({{q(1), q(0), q(3)}, {q(1), q(2), q(0)}, {q(1), q(2), q(4)}});
    const auto sys = examples::build_optimal_stopping(x, ProbMeasure::uniform(3));
    EXPECT_EQ(examples::enumerate_stopping_times(sys.filtration).size(), sys.system.control_count());
    EXPECT_TRUE(validate(sys.system).passed());
    const auto v = verify_bellman(sys.system, compute_tables(sys.system));
    EXPECT_TRUE(v.b1.passed && v.b2.passed && v.b3.passed && v.b4.passed && v.b5.passed);
}

TEST(OptimalStopping, RequiresAConstantInitialValue) {
    const process::DiscreteProcess x({{q(0), q(1)}, {q(1), q(1)}});
    const auto sys = examples::build_optimal_stopping(x, ProbMeasure::uniform(2));
    EXPECT_FALSE(validate(sys.system).passed());
}

// ---------------------------------------------------------------- envelopes

TEST(Envelope, BellmanSystemIsTheMinimalSupermartingaleSystem) {
    const auto bp = examples::build_box_picking();
    const auto& sys = bp.consistent;
    const auto tables = compute_tables(sys);
    EXPECT_EQ(envelope_minimality(sys, tables, tables.value).outcome, EnvelopeOutcome::minimal);

    auto shift = [&](int by) {
        auto out = tables.value;
        for (auto& row : out) {
            for (auto& v : row) {
                std::vector<Rational> w = v.values();
                for (auto& x : w) x += by;
                v = RandomVariable(w);
            }
        }
        return out;
    };
    // a larger supermartingale system is allowed, it is just not V
    const auto above = envelope_minimality(sys, tables, shift(1));
    EXPECT_EQ(above.outcome, EnvelopeOutcome::minimal);
    EXPECT_TRUE(above.strict);
    EXPECT_FALSE(envelope_minimality(sys, tables, tables.value).strict);
    EXPECT_EQ(envelope_minimality(sys, tables, shift(-1)).outcome, EnvelopeOutcome::terminal_fails);

    auto dipped = tables.value;
    const auto zero = *sys.zero_time();
    for (auto& v : dipped[zero]) {
        std::vector<Rational> w = v.values();
        for (auto& x : w) x -= 1;
        v = RandomVariable(w);
    }
    EXPECT_EQ(envelope_minimality(sys, tables, dipped).outcome, EnvelopeOutcome::not_supermartingale);
    EXPECT_EQ(to_string(EnvelopeOutcome::minimal), "minimal");
}

// ------------------------------------------------------------------ validation

TEST(Validation, ClassMissingItsOwnControlIsReported) {
    auto sys = examples::build_box_picking().consistent;
    const auto one = time_index(sys, "1");
    std::vector<std::vector<std::size_t>> lists(sys.control_count());
    for (std::size_t c = 0; c < sys.control_count(); ++c) lists[c] = sys.classes[one].members(c);
    lists[0] = {1};
    sys.classes[one] = ClassTable::from_lists(lists);
    EXPECT_FALSE(validate(sys).passed());
}

TEST(Validation, MismatchedMeasuresOnTheSharedFieldAreReported) {
    auto sys = examples::build_box_picking().consistent;
    sys.controls[3].measure = ProbMeasure({q(1, 2), q(1, 4), q(1, 8), q(1, 8)});
    EXPECT_FALSE(validate(sys).passed());
}

TEST(Validation, ExtremalTimesAreAddedOnce) {
    auto sys = truncation_example();
    const auto with = with_extremal_times(sys);
    EXPECT_EQ(with.time_count(), 3u);
    EXPECT_TRUE(with.zero_time());
    EXPECT_TRUE(with.infinity_time());
    EXPECT_EQ(with_extremal_times(with).time_count(), 3u);
}

TEST(EmptyControlSet, HasNoValue) {
    FiniteControlSystem sys;
    sys.space = finite::SampleSpace::indexed(2);
    EXPECT_FALSE(solve(sys).value);
}

// ------------------------------------------------------- random coherent systems

TEST(RandomSystems, AreValidLatticeClosedAndSatisfyB1) {
    std::mt19937_64 rng(59);
    for (int trial = 0; trial < 30; ++trial) {
        const auto sys = with_extremal_times(random_coherent_system(rng));
        ASSERT_TRUE(validate(sys).passed()) << "trial " << trial;
        const auto tables = compute_tables(sys);
        for (std::size_t s = 0; s < sys.time_count(); ++s) {
            for (std::size_t c = 0; c < sys.control_count(); ++c) {
                const auto v = lattice_check(sys, tables, c, s, 0, std::nullopt);
                EXPECT_TRUE(v.implication_ok);
                EXPECT_TRUE(v.c3);
            }
        }
        EXPECT_TRUE(verify_bellman(sys, tables).b1.passed) << "trial " << trial;
    }
}

TEST(RandomSystems, MutationsAreDetected) {
    std::mt19937_64 rng(61);
    int mutated = 0;
    for (int trial = 0; trial < 60 && mutated < 15; ++trial) {
        const auto sys = with_extremal_times(random_coherent_system(rng));
        const auto m = mutate(rng, sys);
        if (!m) continue;
        ++mutated;
        const auto& bad = m->system;
        bool caught = !validate(bad).passed();
        if (!caught) {
            const auto tables = compute_tables(bad);
            for (std::size_t s = 0; s < bad.time_count() && !caught; ++s) {
                for (std::size_t c = 0; c < bad.control_count() && !caught; ++c) {
                    caught = !lattice_check(bad, tables, c, s, 0, std::nullopt).c3;
                }
            }
            caught = caught || !verify_bellman(bad, tables).b1.passed;
        }
        EXPECT_TRUE(caught) << to_string(m->kind) << ": " << m->description;
    }
    EXPECT_GT(mutated, 5);
}

TEST(RandomSystems, CoarseningsAreSubFields) {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = SigmaField::from_blocks(6, {{0}, {1, 2}, {3}, {4, 5}});
        EXPECT_TRUE(random_coarsening(rng, g).is_coarser_than(g));
    }
}
