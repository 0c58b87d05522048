#include "bellman/mc/switching.hpp"

#include "bellman/errors.hpp"
#include "bellman/mc/rng.hpp"

#include <cmath>
#include <numbers>

namespace bellman::mc {

namespace {

double normal_cdf(double v) { return 0.5 * std::erfc(-v / std::numbers::sqrt2); }

/// exp(a) * Phi(b) without overflow in the product.
double exp_times_cdf(double a, double b) {
    const double phi = normal_cdf(b);
    if (phi <= 0.0) return 0.0;
    return std::exp(a + std::log(phi));
}

std::size_t grid_steps(double span, double dt) { return static_cast<std::size_t>(std::ceil(span / dt - 1e-9)); }

/// Discount factors at grid points and exact discount mass of each step.
struct Grid {
    std::vector<double> disc;
    std::vector<double> weight;

    explicit Grid(const SwitchingConfig& cfg) {
        const auto steps = grid_steps(cfg.t_max, cfg.dt);
        disc.resize(steps + 1);
        weight.resize(steps);
        for (std::size_t k = 0; k <= steps; ++k) disc[k] = std::exp(-cfg.alpha * static_cast<double>(k) * cfg.dt);
        for (std::size_t k = 0; k < steps; ++k) weight[k] = (disc[k] - disc[k + 1]) / cfg.alpha;
    }
};

double run_path(const SwitchingConfig& cfg, const Strategy& strategy, const Grid& grid, std::uint64_t path,
                std::size_t* switches);

}  // namespace

double case_a_cost(double alpha, double z, double /*t*/) { return -2.0 * z / alpha; }

double case_b_cost(double alpha, double z, double t) {
    if (t <= 0.0) return 0.0;
    const double gamma = std::sqrt(2.0 * alpha);
    const double sigma = std::sqrt(t);
    const double mu = -z;
    // Y = sqrt(t)U - z ~ N(mu, t)
    const double mean_abs = sigma * std::sqrt(2.0 / std::numbers::pi) * std::exp(-mu * mu / (2.0 * t)) +
                            mu * (1.0 - 2.0 * normal_cdf(-mu / sigma));
    const double half = gamma * gamma * t / 2.0;
    const double mean_exp = exp_times_cdf(half - gamma * mu, mu / sigma - gamma * sigma) +
                            exp_times_cdf(half + gamma * mu, -mu / sigma - gamma * sigma);
    const double az = std::abs(z);
    return (mean_abs - az) / alpha + (mean_exp - std::exp(-gamma * az)) / (alpha * gamma);
}

double case_a_value(double alpha, double x) { return x / alpha; }

double case_b_value(double alpha, double x) {
    const double gamma = std::sqrt(2.0 * alpha);
    const double ax = std::abs(x);
    return (gamma * ax + std::exp(-gamma * ax)) / (alpha * gamma);
}

Strategy never_switch() {
    return [](const ObservedState&) { return false; };
}

Strategy threshold_strategy(double l) {
    return [l](const ObservedState& s) { return s.z <= -l; };
}

double tail_bound(const SwitchingConfig& cfg) {
    // E sup_{[0,t]} |B| <= 2 sqrt(2t/pi); integrate e^{-alpha t}(|x| + 4 sqrt(2t/pi)) beyond t_max
    const double a = cfg.alpha;
    const double root = std::sqrt(cfg.t_max) / a + std::tgamma(1.5) / std::pow(a, 1.5);
    return std::exp(-a * cfg.t_max) * (std::abs(cfg.x) / a + 4.0 * std::sqrt(2.0 / std::numbers::pi) * root);
}

void validate(const SwitchingConfig& cfg) {
    if (!(cfg.alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    if (cfg.dt > cfg.epsilon / 10.0 * (1.0 + 1e-12)) {
        throw ConfigError("dt must not exceed epsilon/10 (dt = " + std::to_string(cfg.dt) +
                          ", epsilon = " + std::to_string(cfg.epsilon) + ")");
    }
    if (!(cfg.t_max > 0.0)) throw ConfigError("t_max must be positive");
    if (cfg.n_paths == 0) throw ConfigError("n_paths must be positive");
    if (cfg.antithetic && cfg.n_paths % 2 != 0) throw ConfigError("antithetic sampling needs an even path count");
    if (cfg.cost_model == CostModel::custom && !cfg.custom_cost) throw ConfigError("custom cost model without K");
    if (!(cfg.tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    const double tail = tail_bound(cfg);
    if (tail > cfg.tolerance / 10.0) {
        throw ConfigError("t_max too small: tail bound " + std::to_string(tail) + " exceeds tolerance/10");
    }
}

double simulate_switching_path(const SwitchingConfig& cfg, const Strategy& strategy, std::uint64_t path,
                               std::size_t* switches) {
    validate(cfg);
    return run_path(cfg, strategy, Grid(cfg), path, switches);
}

namespace {

double run_path(const SwitchingConfig& cfg, const Strategy& strategy, const Grid& grid, std::uint64_t path,
                std::size_t* switches) {
    const bool negate = cfg.antithetic && (path % 2 == 1);
    StreamRng rng(cfg.seed, cfg.antithetic ? path / 2 : path, negate);
    const std::size_t steps = grid.weight.size();
    const std::size_t wait = grid_steps(cfg.epsilon, cfg.dt);
    const double sqrt_dt = std::sqrt(cfg.dt);
    const double a = cfg.alpha;

    auto cost = [&](double z, double tau) {
        switch (cfg.cost_model) {
            case CostModel::case_a: return case_a_cost(a, z, tau);
            case CostModel::case_b: return case_b_cost(a, z, tau);
            case CostModel::custom: return cfg.custom_cost(z, tau);
        }
        return 0.0;
    };

    int c = 0;
    double observed = 0.0;     // B^c
    double frozen = -cfg.x;    // B^{1-c} at the last jump
    std::size_t last_jump = 0; // in steps
    double z = observed - frozen;
    double reward = 0.0;
    double charged = 0.0;
    std::size_t jumps = 0;

    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * cfg.dt;
        const double disc = grid.disc[k];
        if (k > 0 && k - last_jump >= wait) {
            const double tau = static_cast<double>(k - last_jump) * cfg.dt;
            if (strategy(ObservedState{t, z, tau, c})) {
                charged += disc * cost(z, tau);
                // the unobserved motion has run freely since the last jump
                const double other = frozen + std::sqrt(tau) * rng.normal();
                frozen = observed;
                observed = other;
                c = 1 - c;
                last_jump = k;
                z = observed - frozen;
                ++jumps;
            }
        }
        const double z_start = z;
        observed += sqrt_dt * rng.normal();
        z = observed - frozen;
        reward += grid.weight[k] * 0.5 * (z_start + z);
    }
    if (switches != nullptr) *switches = jumps;
    return reward - charged;
}

}  // namespace

SwitchingEstimate simulate_switching(const SwitchingConfig& cfg, const Strategy& strategy) {
    validate(cfg);
    const Grid grid(cfg);
    std::vector<double> payoff(cfg.n_paths);
    std::vector<double> jumps(cfg.n_paths);
    parallel_for(cfg.n_paths, resolve_workers(cfg.workers), [&](std::size_t i) {
        std::size_t s = 0;
        payoff[i] = run_path(cfg, strategy, grid, i, &s);
        jumps[i] = static_cast<double>(s);
    });

    SwitchingEstimate out;
    if (cfg.antithetic) {
        std::vector<double> pairs(cfg.n_paths / 2);
        for (std::size_t i = 0; i < pairs.size(); ++i) pairs[i] = 0.5 * (payoff[2 * i] + payoff[2 * i + 1]);
        out.payoff = estimate(pairs);
        out.payoff.n = cfg.n_paths;
    } else {
        out.payoff = estimate(payoff);
    }
    out.tail_bound = tail_bound(cfg);
    out.mean_switches = pairwise_sum(jumps) / static_cast<double>(cfg.n_paths);
    out.steps = grid_steps(cfg.t_max, cfg.dt);
    return out;
}

ConvergenceStudy value_convergence_study(const SwitchingConfig& cfg, const std::vector<double>& eps_grid, double l) {
    if (eps_grid.empty()) throw ConfigError("empty epsilon grid");
    for (std::size_t i = 1; i < eps_grid.size(); ++i) {
        if (!(eps_grid[i] < eps_grid[i - 1])) throw ConfigError("epsilon grid must be strictly decreasing");
    }
    ConvergenceStudy study;
    const auto strategy = threshold_strategy(l);
    for (double eps : eps_grid) {
        auto run = cfg;
        run.epsilon = eps;
        run.dt = std::min(cfg.dt, eps / 10.0);
        study.rows.push_back(ConvergenceRow{eps, run.dt, simulate_switching(run, strategy).payoff});
    }
    for (std::size_t i = 1; i < study.rows.size(); ++i) {
        const auto& prev = study.rows[i - 1].estimate;
        const auto& cur = study.rows[i].estimate;
        const double noise = 3.0 * std::hypot(prev.std_error, cur.std_error);
        if (cur.mean < prev.mean - noise) study.nondecreasing = false;
    }

    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (const auto& row : study.rows) {
        const double se = std::max(row.estimate.std_error, 1e-12);
        const double w = 1.0 / (se * se);
        const double x = std::sqrt(row.epsilon);
        sw += w;
        swx += w * x;
        swy += w * row.estimate.mean;
        swxx += w * x * x;
        swxy += w * x * row.estimate.mean;
    }
    const double det = sw * swxx - swx * swx;
    if (study.rows.size() >= 2 && det > 0.0) {
        study.extrapolated = (swxx * swy - swx * swxy) / det;
        study.extrapolated_se = std::sqrt(swxx / det);
    } else {
        study.extrapolated = study.rows.back().estimate.mean;
        study.extrapolated_se = study.rows.back().estimate.std_error;
    }
    return study;
}

}  // namespace bellman::mc
