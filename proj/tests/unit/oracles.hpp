#pragma once

// Test-side reference computations. They work on plain vectors and share no
// code with the library beyond the Rational type.

#include "bellman/rational.hpp"

#include <cstddef>
#include <vector>

namespace oracle {

using bellman::Rational;
using Labels = std::vector<std::size_t>;
using Values = std::vector<Rational>;
using Paths = std::vector<std::vector<Rational>>;
inline constexpr std::size_t kNever = static_cast<std::size_t>(-1);

/// Canonical relabelling: first-seen order.
Labels canonical(const Labels& labels);

/// Label of the level sets of (row truncated to t+1 entries).
Labels prefix_labels(const Paths& x, std::size_t t);

/// Subset test: a (as outcome indicator) is a union of blocks of labels.
bool measurable(const std::vector<bool>& a, const Labels& labels);

/// {S <= t} in F_t for every t.
bool is_stopping(const std::vector<std::size_t>& s, const std::vector<Labels>& f);

/// F_S by enumerating every subset of Omega (n <= 12) and separating outcomes.
Labels stopped_field(const std::vector<Labels>& f, const std::vector<std::size_t>& s);

/// sigma(X^S): level sets of the stopped path.
Labels stopped_path_labels(const Paths& x, const std::vector<std::size_t>& s);

/// E^w[x | labels], 0 on null blocks.
Values cond_exp(const Values& w, const Values& x, const Labels& labels);

/// Backward induction E_H = X_H, E_t = max(X_t, E[E_{t+1} | F_t]).
std::vector<Values> snell(const Paths& x, const std::vector<Labels>& f, const Values& w);

/// Box picking by direct enumeration of second-box rules.
struct BoxOracle {
    Rational value;
    /// Best payoff knowing only Y_1 (after opening box 1 first).
    Values v_hat_1;
    /// Best payoff with every box revealed at time 1 (box 1 opened first).
    Values w_star_1;
    Rational classical_value;
};
BoxOracle box_picking();

}  // namespace oracle
