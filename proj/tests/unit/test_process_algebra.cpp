#include "oracles.hpp"

#include "bellman/errors.hpp"
#include "bellman/process_algebra.hpp"
#include "bellman/process_campaign.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace bellman;
using namespace bellman::process;
using bellman::finite::ProbMeasure;
using bellman::finite::SigmaField;

namespace {

std::vector<oracle::Labels> stages(const finite::Filtration& f) {
    std::vector<oracle::Labels> out;
    for (const auto& g : f.stages()) out.push_back(g.labelling());
    return out;
}

DiscreteProcess paths(std::initializer_list<std::initializer_list<long>> rows) {
    std::vector<std::vector<Rational>> out;
    for (auto r : rows) {
        std::vector<Rational> row;
        for (auto v : r) row.emplace_back(v);
        out.push_back(row);
    }
    return DiscreteProcess(out);
}

}  // namespace

TEST(RandomTime, InfinityIsDistinctFromTheHorizon) {
    const RandomTime s({0, 2, kInfinity});
    EXPECT_EQ(time_to_string(s[2]), "inf");
    EXPECT_EQ(s.at_most(2), (std::vector<bool>{true, true, false}));
    EXPECT_FALSE(s.deterministic_value());
    EXPECT_EQ(RandomTime::constant(3, 4).deterministic_value(), 4u);
}

TEST(NaturalFiltration, StagesAreLevelSetsOfPrefixes) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = rng() % 6 + 1;
        const std::size_t h = rng() % 4;
        const auto x = random_process(rng, n, h, 3);
        const auto f = natural_filtration(x);
        for (std::size_t t = 0; t <= h; ++t) {
            EXPECT_EQ(f.stage(t).labelling(), oracle::canonical(oracle::prefix_labels(x.rows(), t)));
        }
    }
}

TEST(StoppingTimes, RecognitionMatchesDefinition) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = rng() % 6 + 1;
        const std::size_t h = rng() % 4;
        const auto f = natural_filtration(random_process(rng, n, h, 2));
        const auto s = random_time(rng, n, h);
        EXPECT_EQ(is_stopping_time(s, f), oracle::is_stopping(s.values(), stages(f)));
        EXPECT_TRUE(is_stopping_time(random_stopping_time(rng, f), f));
    }
}

TEST(StoppedField, AgreesWithSubsetEnumerationOracle) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = rng() % 8 + 1;
        const std::size_t h = rng() % 5;
        const auto f = natural_filtration(random_process(rng, n, h, 3));
        const auto s = random_stopping_time(rng, f);
        const auto expected = oracle::canonical(oracle::stopped_field(stages(f), s.values()));
        EXPECT_EQ(sigma_at(f, s).labelling(), expected);
        EXPECT_EQ(sigma_at_bruteforce(f, s).labelling(), expected);
    }
}

TEST(StoppedField, RejectsNonStoppingTimes) {
    const auto x = paths({{0, 0}, {0, 1}});
    const auto f = natural_filtration(x);
    EXPECT_THROW(sigma_at(f, RandomTime({0, 1})), PreconditionError);
    EXPECT_NO_THROW(sigma_at(f, RandomTime({1, kInfinity})));
}

TEST(StoppedField, ConstantTimesGiveTheStage) {
    std::mt19937_64 rng(29);
    const auto f = natural_filtration(random_process(rng, 6, 3, 2));
    for (Time t = 0; t <= 3; ++t) EXPECT_EQ(sigma_at(f, RandomTime::constant(6, t)), f.stage(t));
    EXPECT_EQ(sigma_at(f, RandomTime::constant(6, kInfinity)), f.terminal());
}

TEST(Galmarino, StoppedFieldIsGeneratedByStoppedPathForStoppingTimes) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = rng() % 8 + 1;
        const std::size_t h = rng() % 5;
        const auto x = random_process(rng, n, h, 3);
        const auto s = random_stopping_time(rng, natural_filtration(x));
        const auto report = galmarino_check(x, s);
        EXPECT_TRUE(report.fields_equal);
        EXPECT_TRUE(report.characterization_agrees);
        EXPECT_EQ(report.generated_field.labelling(),
                  oracle::canonical(oracle::stopped_path_labels(x.rows(), s.values())));
        EXPECT_EQ(stopping_time_equivalence(x, s), std::make_pair(true, true));
    }
}

TEST(Galmarino, TimesThatPeekAheadAreRejected) {
    // S looks at X_1 to decide whether to stop at 0
    const auto x = paths({{0, 0}, {0, 1}});
    const RandomTime s({0, 1});
    EXPECT_THROW(galmarino_check(x, s), PreconditionError);
    EXPECT_EQ(stopping_time_equivalence(x, s), std::make_pair(false, false));
}

TEST(ObservationalConsistency, GluedProcessesShareTheStoppedField) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = rng() % 7 + 1;
        const std::size_t h = rng() % 4 + 1;
        const auto x = random_process(rng, n, h, 3);
        const auto s = random_stopping_time(rng, natural_filtration(x));
        const auto y = glue_after(rng, x, s, 3);
        EXPECT_EQ(stop_process(x, s), stop_process(y, s));
        EXPECT_TRUE(observational_consistency(x, y, s));
        EXPECT_TRUE(is_stopping_time(s, natural_filtration(y)));
    }
}

TEST(InformationMonotone, LaterStoppingRevealsMore) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const auto z = random_process(rng, 6, 3, 2);
        const auto f = natural_filtration(z);
        const auto a = random_stopping_time(rng, f);
        const auto b = random_stopping_time(rng, f);
        const auto u = min(a, b);
        const auto v = max(a, b);
        EXPECT_TRUE(is_stopping_time(u, f));
        EXPECT_TRUE(information_monotone(z, u, v));
    }
}

TEST(FirstEntrance, IsAStoppingTime) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_process(rng, 5, 3, 3);
        const auto s = first_entrance(x, [](const Rational& v) { return v == 2; });
        EXPECT_TRUE(is_stopping_time(s, natural_filtration(x)));
        for (std::size_t w = 0; w < 5; ++w) {
            if (s[w] != kInfinity) {
                EXPECT_EQ(x.at(w, s[w]), 2);
            }
        }
    }
}

TEST(Completion, NullOutcomeLetsAPeekingTimeBecomeAStoppingTime) {
    // outcome 1 is null; S differs from a stopping time only there
    const ProbMeasure mu({Rational(1, 2), Rational(0), Rational(1, 2)});
    const auto x = paths({{0, 0}, {0, 1}, {1, 1}});
    const RandomTime s({1, 0, 0});
    const auto f = natural_filtration(x);
    EXPECT_FALSE(is_stopping_time(s, f));
    EXPECT_TRUE(is_stopping_time(s, complete(f, mu)));
    const auto version = as_stopping_version(f, mu, s);
    ASSERT_TRUE(version);
    EXPECT_TRUE(is_stopping_time(*version, f));
    EXPECT_TRUE(as_equal(mu, *version, s));
}

TEST(Completion, VariantsAgreeUpToNullOutcomes) {
    const ProbMeasure mu({Rational(1, 2), Rational(0), Rational(1, 2)});
    const auto x = paths({{0, 0}, {0, 1}, {1, 1}});
    // y differs from x on the null outcome only
    const auto y = paths({{0, 0}, {0, 5}, {1, 1}});
    const RandomTime s({1, 0, 0});
    const auto r = as_variants_check(mu, x, y, s);
    EXPECT_TRUE(r.x_galmarino);
    EXPECT_TRUE(r.y_galmarino);
    EXPECT_TRUE(r.stopped_fields_agree);
    EXPECT_TRUE(r.stopping_version_invariant);
    EXPECT_TRUE(r.holds);

    const auto z = paths({{0, 3}, {0, 1}, {1, 1}});
    EXPECT_THROW(as_variants_check(mu, x, z, s), PreconditionError);
}

TEST(AccessesInfinity, TerminalTraceIsJoinedFromStoppedFields) {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = rng() % 6 + 1;
        const std::size_t h = rng() % 3 + 1;
        const auto f = natural_filtration(random_process(rng, n, h, 2));
        auto s = random_stopping_time(rng, f);
        // cap at the horizon so the sequence (s, horizon) reaches it everywhere
        const auto cap = RandomTime::constant(n, h);
        s = min(s, cap);
        const std::vector<bool> everywhere(n, true);
        EXPECT_TRUE(accesses_infinity_trace_identity(f, {s, cap}, everywhere));
    }
    const auto f = natural_filtration(paths({{0, 0}, {0, 1}}));
    EXPECT_THROW(accesses_infinity_trace_identity(f, {RandomTime({0, 0})}, {true, true}), PreconditionError);
}

TEST(Campaign, StoppingInstancesAreCleanAndPeekingOnesAreCaught) {
    CampaignOptions options;
    options.instances = 200;
    options.seed = 9;
    const auto clean = run_galmarino_campaign(options);
    EXPECT_EQ(clean.instances, 200u);
    EXPECT_TRUE(clean.clean());

    options.allow_nonstopping = true;
    EXPECT_FALSE(run_galmarino_campaign(options).clean());

    options.instances = 0;
    EXPECT_TRUE(run_galmarino_campaign(options).clean());
}
