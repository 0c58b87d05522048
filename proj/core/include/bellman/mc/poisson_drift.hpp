#pragma once

// Tracking a Poisson process with random drifts: W = N + drift R_n on
// [S_n, S_{n+1}), P(R_n = +1) = 2/3. The tracker X-hat resets to W at
// arrivals and drifts +1 in between; the deviating control X* drifts -1 on
// (t, S_t) instead, S_t being the first arrival after t.

#include "bellman/mc/parallel.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace bellman::mc {

struct PoissonDriftConfig {
    double alpha = 1.0;
    double t = std::log(2.0);
    /// 0 means 40/alpha.
    double t_max = 0.0;
    std::size_t n_paths = 200000;
    std::uint64_t seed = 1;
    double p_plus = 2.0 / 3.0;
    std::size_t workers = 0;
};

void validate(const PoissonDriftConfig& cfg);

struct PoissonDriftReport {
    /// E J(X-hat) against v = (1 - p_plus)/alpha.
    Estimate j_hat;
    double v_target = 0.0;
    /// E[(J(X*) - J(X-hat)) 1{R_t = -1}] against -(1 - p_plus) e^{-alpha t} / (1 + alpha).
    Estimate gap;
    double gap_target = 0.0;
    /// E[J(X-hat) 1{R_t = +1} + J(X*) 1{R_t = -1}], an upper bound for E V_t,
    /// against v - (1 - p_plus) e^{-alpha t} / (1 + alpha).
    Estimate bound;
    double bound_target = 0.0;
    double tail_bound = 0.0;
};

PoissonDriftReport simulate_poisson_drift(const PoissonDriftConfig& cfg);

struct GapPoint {
    double t = 0.0;
    Estimate gap;
    double target = 0.0;
};

/// The gap at each probe time of t_grid, same seed for every point.
std::vector<GapPoint> gap_profile(const PoissonDriftConfig& cfg, const std::vector<double>& t_grid);

}  // namespace bellman::mc
