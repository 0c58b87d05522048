#pragma once

// Box picking and optimal stopping as finite control systems.

#include "bellman/control_engine.hpp"
#include "bellman/control_system.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace bellman::examples {

using control::FiniteControlSystem;
using finite::Filtration;
using finite::ProbMeasure;
using finite::RandomVariable;
using process::DiscreteProcess;

struct BoxPickingSystem {
    /// Each control observes its own boxes: G^c is the natural filtration of X^c.
    FiniteControlSystem consistent;
    /// One filtration for everyone: F_0 trivial, F_1 = F_2 = all subsets.
    FiniteControlSystem classical;
    /// Index of c* = (c_1 = 1, c_2 = 2 on {X_1 = 0}, 1 on {X_1 = 1}).
    std::size_t c_star = 0;
};

/// Omega = {0,1} x {-1,1} with weights 1/6, 1/3, 1/3, 1/6; all eight
/// predictable {1,2}-valued strategies; J(c) = X^c_1 + X^c_2; times 0, 1, 2
/// and infinity; D(c,t) = controls agreeing with c through t.
BoxPickingSystem build_box_picking();

/// The two payoff values reachable under c_1 in box picking, lower one first.
std::vector<Rational> box_values(int box);

struct OptimalStoppingSystem {
    FiniteControlSystem system;
    DiscreteProcess x;
    Filtration filtration;
    ProbMeasure measure{std::vector<Rational>{Rational(1)}};
    /// Index of tau = horizon, the control that has not stopped before any t.
    std::size_t never_stopped = 0;
};

/// Every stopping time of the natural filtration of x bounded by the horizon.
std::vector<process::RandomTime> enumerate_stopping_times(const Filtration& f);

/// Controls are the stopping times tau <= horizon with G^tau_t = F_{t ^ tau},
/// P^tau = p and J(tau) = X_tau; times are 0..horizon and infinity with
/// D(tau,t) = {tau' : tau' ^ t = tau ^ t}.
OptimalStoppingSystem build_optimal_stopping(const DiscreteProcess& x, const ProbMeasure& p);

/// E_H = X_H, E_t = max(X_t, E[E_{t+1} | F_t]).
std::vector<RandomVariable> snell_envelope(const DiscreteProcess& x, const Filtration& f, const ProbMeasure& p);

/// V(never_stopped, t) equals the Snell envelope at t, P-a.s., for every t.
bool snell_crosscheck(const OptimalStoppingSystem& sys);
bool snell_crosscheck(const OptimalStoppingSystem& sys, const control::SystemTables& tables);

}  // namespace bellman::examples
