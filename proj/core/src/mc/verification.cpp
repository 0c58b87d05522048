#include "bellman/mc/verification.hpp"

#include "bellman/errors.hpp"
#include "bellman/mc/switching.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace bellman::mc {

namespace {

constexpr double kBound = 12.0;

template <unsigned N, typename F>
double legendre(const F& f, double a, double b) {
    return boost::math::quadrature::gauss<double, N>::integrate(f, a, b);
}

double standard_normal_density(double u) { return std::exp(-0.5 * u * u) / std::sqrt(2.0 * std::numbers::pi); }

double second_derivative(const VerificationInput& in, double z) {
    if (in.h2) return in.h2(z);
    const double d = 1e-4;
    return (in.h(z + d) - 2.0 * in.h(z) + in.h(z - d)) / (d * d);
}

double finite_or_throw(double v, const char* what, double z) {
    if (!std::isfinite(v)) throw DomainError(std::string(what) + " is not finite at z = " + std::to_string(z));
    return v;
}

struct Tracker {
    explicit Tracker(ConditionReport r) : report(std::move(r)) {}
    ConditionReport report;
    /// strict_region: outside the region where the matching equality is required.
    void record(double r, double z, double t, bool equality_here, bool strict_region, double tol) {
        ++report.points;
        const double magnitude = equality_here ? std::abs(r) : r;
        if (magnitude > tol) ++report.violations;
        if (report.points == 1 || r > report.max_residual) report.max_residual = r;
        if (equality_here && std::abs(r) >= report.max_abs_residual) {
            report.max_abs_residual = std::abs(r);
        }
        // the worst location is the one furthest on the wrong side
        if (report.points == 1 || magnitude > worst_) {
            worst_ = magnitude;
            report.worst_z = z;
            report.worst_t = t;
        }
        if (strict_region) {
            if (r < -tol) ++report.strict_points;
            if (r > tol) report.strict_sign_ok = false;
        }
    }

private:
    double worst_ = 0.0;
};

}  // namespace

std::vector<double> default_z_grid() {
    std::vector<double> z;
    for (int i = -20; i <= 20; ++i) z.push_back(0.25 * i);
    return z;
}

std::vector<double> default_t_grid() { return {0.0, 0.25, 1.0, 4.0}; }

VerificationInput case_a_input(double alpha) {
    VerificationInput in;
    in.alpha = alpha;
    in.candidate = Candidate::case_a;
    in.h = [alpha](double z) { return z / alpha; };
    in.h2 = [](double) { return 0.0; };
    in.cost = [alpha](double z, double t) { return case_a_cost(alpha, z, t); };
    in.l = 0.0;
    in.z_grid = default_z_grid();
    in.t_grid = default_t_grid();
    return in;
}

VerificationInput case_b_input(double alpha) {
    VerificationInput in;
    in.alpha = alpha;
    in.candidate = Candidate::case_b;
    const double gamma = std::sqrt(2.0 * alpha);
    in.h = [alpha, gamma](double z) {
        const double a = std::abs(z);
        return (gamma * a + std::exp(-gamma * a)) / (alpha * gamma);
    };
    in.h2 = [alpha, gamma](double z) { return gamma * std::exp(-gamma * std::abs(z)) / alpha; };
    in.cost = [alpha](double z, double t) { return case_b_cost(alpha, z, t); };
    in.l = 0.0;
    in.z_grid = default_z_grid();
    in.t_grid = default_t_grid();
    return in;
}

VerificationInput perturbed(VerificationInput in, double coeff) {
    in.candidate = Candidate::custom;
    in.h = [h = in.h, coeff](double z) { return h(z) + coeff * z * z; };
    if (in.h2) in.h2 = [h2 = in.h2, coeff](double z) { return h2(z) + 2.0 * coeff; };
    return in;
}

double jump_expectation(const VerificationInput& in, double z, double t) {
    const double hz = in.h(z);
    if (t <= 0.0) return in.h(-z) - hz;
    const double root = std::sqrt(t);
    std::vector<double> edges;
    for (double e = -kBound; e <= kBound; e += 1.0) edges.push_back(e);
    const double kink = z / root;
    if (kink > -kBound && kink < kBound) edges.push_back(kink);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    auto integrand = [&](double u) { return (in.h(root * u - z) - hz) * standard_normal_density(u); };
    double total = 0.0;
    for (std::size_t i = 1; i < edges.size(); ++i) {
        const double a = edges[i - 1];
        const double b = edges[i];
        switch (in.quadrature_order) {
            case 10: total += legendre<10>(integrand, a, b); break;
            case 20: total += legendre<20>(integrand, a, b); break;
            case 30: total += legendre<30>(integrand, a, b); break;
            default: throw ConfigError("quadrature order must be 10, 20 or 30");
        }
    }
    return total;
}

bool VerificationReport::passed() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const ConditionReport& c) { return c.passed(); });
}

const ConditionReport* VerificationReport::find(const std::string& name) const {
    for (const auto& c : conditions) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

VerificationReport check_verification_conditions(const VerificationInput& in) {
    if (!in.h || !in.cost) throw ConfigError("verification input needs h and K");
    if (!(in.alpha > 0.0)) throw ConfigError("alpha must be positive");
    if (in.z_grid.empty() || in.t_grid.empty()) throw ConfigError("empty grid");

    Tracker w1{ConditionReport{.name = "W(i)"}};
    Tracker w2{ConditionReport{.name = "W(ii)"}};
    Tracker w3{ConditionReport{.name = "W(iii)", .equality = true}};
    Tracker w4{ConditionReport{.name = "W(iv)", .equality = true}};
    const double tol = in.tolerance;

    for (double z : in.z_grid) {
        const double hz = finite_or_throw(in.h(z), "h", z);
        const double h2 = finite_or_throw(second_derivative(in, z), "h''", z);
        const double r = z - in.alpha * hz + 0.5 * h2;
        const bool equality_region = z >= -in.l;
        w1.record(r, z, 0.0, false, !equality_region, tol);
        if (equality_region) w3.record(r, z, 0.0, true, false, tol);
        for (double t : in.t_grid) {
            if (t < 0.0) throw ConfigError("negative t in grid");
            const double k = finite_or_throw(in.cost(z, t), "K", z);
            const double jump = finite_or_throw(jump_expectation(in, z, t), "E[h(sqrt(t)U - z) - h(z)]", z);
            const double rj = -k + jump;
            const bool jump_equality = z <= -in.l && t > 0.0;
            w2.record(rj, z, t, false, !jump_equality, tol);
            if (jump_equality) w4.record(rj, z, t, true, false, tol);
        }
    }
    return VerificationReport{{w1.report, w2.report, w3.report, w4.report}};
}

}  // namespace bellman::mc
