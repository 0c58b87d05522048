#pragma once

// The Brownian switching game: two independent Brownian motions B^0 (from 0)
// and B^1 (from -x); a control observes one of them at a time, may switch at
// most once every epsilon, and earns the discounted observed advantage
// Z^c = B^c - B^{1-c}_{sigma^c} minus discounted switching costs K.

#include "bellman/mc/parallel.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace bellman::mc {

enum class CostModel { case_a, case_b, custom };

/// K(z,t) = -2z/alpha.
double case_a_cost(double alpha, double z, double t);

/// K(z,t) = E[(|sqrt(t)U - z| - |z|)/alpha + (exp(-gamma|sqrt(t)U - z|) - exp(-gamma|z|))/(alpha gamma)],
/// U standard normal, gamma = sqrt(2 alpha), in closed form (the L term is zero).
double case_b_cost(double alpha, double z, double t);

/// x/alpha.
double case_a_value(double alpha, double x);

/// (gamma|x| + exp(-gamma|x|)) / (alpha gamma).
double case_b_value(double alpha, double x);

struct SwitchingConfig {
    double alpha = 1.0;
    double x = 0.0;
    double epsilon = 0.2;
    double dt = 0.01;
    double t_max = 20.0;
    std::size_t n_paths = 100000;
    std::uint64_t seed = 1;
    CostModel cost_model = CostModel::case_a;
    /// Used when cost_model is custom.
    std::function<double(double z, double t)> custom_cost;
    /// Tolerance the truncation tail must stay well inside (tail <= tolerance / 10).
    double tolerance = 0.02;
    bool antithetic = false;
    /// 0 means default_workers().
    std::size_t workers = 0;
};

/// What a control may see at a decision instant: left limits of the observed
/// quantities only. The unobserved Brownian motion is not part of it.
struct ObservedState {
    double t = 0.0;
    double z = 0.0;
    double tau = 0.0;
    int c = 0;
};

/// Returns true to switch now. Requests within epsilon of the last jump (or of
/// time zero) are ignored, which keeps every control epsilon-separated.
using Strategy = std::function<bool(const ObservedState&)>;

Strategy never_switch();

/// c^eps: waits epsilon after each jump and at the start, then switches at the
/// first entrance of Z into (-inf, -l].
Strategy threshold_strategy(double l);

/// Upper bound on E of the discarded reward beyond t_max, using
/// |Z_t| <= |x| + sup|B^0| + sup|B^1| on [0,t].
double tail_bound(const SwitchingConfig& cfg);

/// Throws ConfigError on alpha, epsilon, dt <= 0, dt > epsilon/10, missing
/// custom cost, no paths, or a tail bound above tolerance/10.
void validate(const SwitchingConfig& cfg);

struct SwitchingEstimate {
    Estimate payoff;
    double tail_bound = 0.0;
    double mean_switches = 0.0;
    std::size_t steps = 0;
};

SwitchingEstimate simulate_switching(const SwitchingConfig& cfg, const Strategy& strategy);

/// Payoff of one path, exposed for tests.
double simulate_switching_path(const SwitchingConfig& cfg, const Strategy& strategy, std::uint64_t path,
                               std::size_t* switches = nullptr);

struct ConvergenceRow {
    double epsilon = 0.0;
    double dt = 0.0;
    Estimate estimate;
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    /// Each estimate at least the previous one minus three combined standard errors.
    bool nondecreasing = true;
    /// Weighted least squares fit a + b sqrt(eps); a is the extrapolated value.
    double extrapolated = 0.0;
    double extrapolated_se = 0.0;
};

/// Runs c^eps (with cfg.epsilon replaced) for each eps of a strictly
/// decreasing grid, with dt = min(cfg.dt, eps/10).
ConvergenceStudy value_convergence_study(const SwitchingConfig& cfg, const std::vector<double>& eps_grid,
                                         double l = 0.0);

}  // namespace bellman::mc
