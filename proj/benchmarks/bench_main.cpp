#include "bellman/control_engine.hpp"
#include "bellman/examples.hpp"
#include "bellman/mc/poisson_drift.hpp"
#include "bellman/mc/switching.hpp"
#include "bellman/mc/verification.hpp"
#include "bellman/process_campaign.hpp"
#include "bellman/random_systems.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace bellman;

static void BM_StoppedField(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto x = process::random_process(rng, n, 5, 3);
    const auto f = process::natural_filtration(x);
    const auto s = process::random_stopping_time(rng, f);
    for (auto _ : state) benchmark::DoNotOptimize(process::sigma_at(f, s));
}
BENCHMARK(BM_StoppedField)->Arg(8)->Arg(64)->Arg(512);

static void BM_StoppedFieldBruteforce(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const auto x = process::random_process(rng, 8, 5, 3);
    const auto f = process::natural_filtration(x);
    const auto s = process::random_stopping_time(rng, f);
    for (auto _ : state) benchmark::DoNotOptimize(process::sigma_at_bruteforce(f, s));
}
BENCHMARK(BM_StoppedFieldBruteforce);

static void BM_BoxPickingTables(benchmark::State& state) {
    const auto bp = examples::build_box_picking();
    for (auto _ : state) benchmark::DoNotOptimize(control::compute_tables(bp.consistent));
}
BENCHMARK(BM_BoxPickingTables);

static void BM_VerifyRandomSystem(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const auto sys = control::with_extremal_times(control::random_coherent_system(rng));
    for (auto _ : state) {
        const auto tables = control::compute_tables(sys);
        benchmark::DoNotOptimize(control::verify_bellman(sys, tables));
    }
}
BENCHMARK(BM_VerifyRandomSystem);

static void BM_GalmarinoCampaign(benchmark::State& state) {
    process::CampaignOptions options;
    options.instances = 100;
    for (auto _ : state) benchmark::DoNotOptimize(process::run_galmarino_campaign(options));
}
BENCHMARK(BM_GalmarinoCampaign)->Unit(benchmark::kMillisecond);

static void BM_SwitchingPath(benchmark::State& state) {
    mc::SwitchingConfig cfg;
    cfg.cost_model = state.range(0) == 0 ? mc::CostModel::case_a : mc::CostModel::case_b;
    if (state.range(0) == 1) cfg.t_max = 40.0;
    const auto strategy = mc::threshold_strategy(0.0);
    std::uint64_t path = 0;
    for (auto _ : state) benchmark::DoNotOptimize(mc::simulate_switching_path(cfg, strategy, path++));
}
BENCHMARK(BM_SwitchingPath)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

static void BM_CaseBCost(benchmark::State& state) {
    double z = -2.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(mc::case_b_cost(0.5, z, 0.7));
        z = z > 2.0 ? -2.0 : z + 0.01;
    }
}
BENCHMARK(BM_CaseBCost);

static void BM_VerificationLemma(benchmark::State& state) {
    const auto in = mc::case_b_input(0.5);
    for (auto _ : state) benchmark::DoNotOptimize(mc::check_verification_conditions(in));
}
BENCHMARK(BM_VerificationLemma)->Unit(benchmark::kMillisecond);

static void BM_PoissonDrift(benchmark::State& state) {
    mc::PoissonDriftConfig cfg;
    cfg.n_paths = 10000;
    cfg.workers = 1;
    for (auto _ : state) benchmark::DoNotOptimize(mc::simulate_poisson_drift(cfg));
}
BENCHMARK(BM_PoissonDrift)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
