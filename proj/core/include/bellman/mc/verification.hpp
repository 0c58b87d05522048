#pragma once

// Numerical check of the verification-lemma conditions for a candidate value
// function h of the switching game:
//   W(i)   z - alpha h(z) + h''(z)/2 <= 0 for all z
//   W(ii)  -K(z,t) + E[h(sqrt(t)U - z) - h(z)] <= 0 for all z, t >= 0
//   W(iii) equality in W(i) for z >= -l
//   W(iv)  equality in W(ii) for z <= -l, t > 0

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bellman::mc {

enum class Candidate { case_a, case_b, custom };

struct VerificationInput {
    double alpha = 1.0;
    Candidate candidate = Candidate::custom;
    std::function<double(double)> h;
    /// Second derivative in closed form; central differences when absent.
    std::function<double(double)> h2;
    std::function<double(double z, double t)> cost;
    double l = 0.0;
    std::vector<double> z_grid;
    std::vector<double> t_grid;
    /// Gauss-Legendre points per unit panel: 10, 20 or 30.
    std::size_t quadrature_order = 20;
    double tolerance = 1e-10;
};

/// h(z) = z/alpha, K(z,t) = -2z/alpha.
VerificationInput case_a_input(double alpha);

/// h(z) = psi(|z|), psi(z) = (gamma z + e^{-gamma z})/(alpha gamma), gamma =
/// sqrt(2 alpha), l = 0 and the closed-form case (b) kernel with L = 0.
VerificationInput case_b_input(double alpha);

/// Adds coeff * z^2 to h (and 2 coeff to h'').
VerificationInput perturbed(VerificationInput in, double coeff);

/// z in [-5, 5] step 0.25 and t in {0, 0.25, 1, 4}.
std::vector<double> default_z_grid();
std::vector<double> default_t_grid();

/// E[h(sqrt(t)U - z) - h(z)] by panelled Gauss-Legendre on [-12, 12], split at
/// the point where sqrt(t)u - z crosses 0.
double jump_expectation(const VerificationInput& in, double z, double t);

struct ConditionReport {
    std::string name;
    /// Equality conditions need |r| <= tol, inequality conditions r <= tol.
    bool equality = false;
    std::size_t points = 0;
    std::size_t violations = 0;
    double max_residual = 0.0;
    double max_abs_residual = 0.0;
    double worst_z = 0.0;
    double worst_t = 0.0;
    /// Points of an inequality condition outside the matching equality region
    /// where the residual is strictly negative, and whether none is positive.
    std::size_t strict_points = 0;
    bool strict_sign_ok = true;
    bool passed() const { return violations == 0; }
};

struct VerificationReport {
    std::vector<ConditionReport> conditions;
    bool passed() const;
    const ConditionReport* find(const std::string& name) const;
};

/// Throws DomainError when h or K is not finite at a grid point.
VerificationReport check_verification_conditions(const VerificationInput& in);

}  // namespace bellman::mc
