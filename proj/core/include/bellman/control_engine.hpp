#pragma once

// Conditional payoff and Bellman systems, the lattice chain, Bellman's
// principle and the supermartingale envelope on finite control systems.

#include "bellman/control_system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bellman::control {

/// Every G^c_{S^c}, J(c,S) and V(c,S), indexed [time][control].
struct SystemTables {
    std::vector<std::vector<SigmaField>> field;
    std::vector<std::vector<RandomVariable>> payoff;
    std::vector<std::vector<RandomVariable>> value;
};

/// Throws PreconditionError if some S^c is not a stopping time of G^c.
SystemTables compute_tables(const FiniteControlSystem& sys);

/// J(c,S) = E^{P^c}[J(c) | G^c_{S^c}].
RandomVariable conditional_payoff(const FiniteControlSystem& sys, std::size_t c, std::size_t s);

/// V(c,S) = ess sup over d in D(c,S) of J(d,S), taken pointwise.
RandomVariable bellman_value(const FiniteControlSystem& sys, std::size_t c, std::size_t s);

struct Solution {
    /// nullopt stands for -infinity (no controls).
    std::optional<Rational> value;
    /// Optimal control indices, ordered by ascending id.
    std::vector<std::size_t> optimal;
};

Solution solve(const FiniteControlSystem& sys);

struct LatticeVerdict {
    std::string control;
    std::string time;
    Rational eps;
    /// nullopt means M = +infinity.
    std::optional<Rational> cap;
    bool c1 = false;
    bool c2 = false;
    bool c3 = false;
    /// False when an implication that must hold is violated (C2 => C3 always,
    /// C1 => C2 for M = +infinity).
    bool implication_ok = true;
    std::vector<Witness> witnesses;
};

/// Exhaustive check of C1, C2, C3 for (c,S) over every pair in D(c,S) and
/// every event of G^c_{S^c} (at most 20 atoms).
LatticeVerdict lattice_check(const FiniteControlSystem& sys, const SystemTables& tables, std::size_t c, std::size_t s,
                             const Rational& eps, const std::optional<Rational>& cap);

struct ConsistencyVerdict {
    /// E[V(c,T) | A] = ess sup_d E^{P^d}[J(d) | A], P^c-a.s.
    bool conditional = false;
    /// E V(c,T) = sup_d E^{P^d} J(d)
    bool expectation = false;
    std::vector<Witness> witnesses;
};

/// Requires A coarser than G^c_{T^c} and the (0, +inf) lattice property for
/// (c,T); throws PreconditionError otherwise.
ConsistencyVerdict consistency_theorem_check(const FiniteControlSystem& sys, const SystemTables& tables,
                                             std::size_t c, std::size_t t, const SigmaField& a);

struct PrincipleVerdict {
    std::string name;
    bool passed = true;
    std::size_t checked = 0;
    std::size_t violations = 0;
    std::vector<Witness> witnesses;
    void fail(Witness w);
};

struct BellmanVerification {
    Solution solution;
    /// V is a supermartingale system: measurability, agreement across classes, inequality.
    PrincipleVerdict b1{.name = "B1"};
    /// Constant expectation v along each optimal control.
    PrincipleVerdict b2{.name = "B2"};
    /// Martingale equalities along each optimal control.
    PrincipleVerdict b3{.name = "B3"};
    /// Conditional optimality propagates to later times.
    PrincipleVerdict b4{.name = "B4"};
    /// Constant expectation plus convergence along the chain certifies optimality.
    PrincipleVerdict b5{.name = "B5"};
    std::vector<std::string> chain;
    std::vector<std::string> notes;
};

/// The chain used for B5 when none is supplied: the deterministic times in
/// ascending order, beginning at 0 and ending at infinity.
std::vector<std::size_t> default_chain(const FiniteControlSystem& sys);

/// Requires the times 0 and infinity to be present (see with_extremal_times).
BellmanVerification verify_bellman(const FiniteControlSystem& sys, const SystemTables& tables,
                                   const std::optional<std::vector<std::size_t>>& chain = std::nullopt);

enum class EnvelopeOutcome { minimal, not_supermartingale, terminal_fails, below_bellman };

std::string to_string(EnvelopeOutcome outcome);
using bellman::to_string;

struct EnvelopeVerdict {
    EnvelopeOutcome outcome = EnvelopeOutcome::minimal;
    /// W >= V everywhere with W != V on some charged outcome.
    bool strict = false;
    std::vector<Witness> witnesses;
};

/// Checks that W (indexed [time][control]) is a supermartingale system with
/// the terminal condition, then that it dominates V.
EnvelopeVerdict envelope_minimality(const FiniteControlSystem& sys, const SystemTables& tables,
                                    const std::vector<std::vector<RandomVariable>>& w);

struct PayoffCase {
    std::size_t c = 0;
    std::size_t d = 0;
    std::size_t s = 0;
    Event a;
};

struct PayoffSystemVerdict {
    bool measurable = true;
    bool agrees_on_equal_times = true;
    std::size_t cases = 0;
    std::size_t hypotheses_met = 0;
    bool conclusion_holds = true;
    std::vector<Witness> witnesses;
    bool passed() const { return measurable && agrees_on_equal_times && conclusion_holds; }
};

/// For every pair c ~_S d (c before d) and every S, the case A = Omega.
std::vector<PayoffCase> default_payoff_cases(const FiniteControlSystem& sys);

/// The payoff-system definition for J, plus the agreement J(c,S) = J(d,S) on A
/// for each case whose hypotheses hold: some T in the family with c ~_T d,
/// A in G^c_{T^c}, T^c and T^d reaching the horizon a.s. on A, and terminal
/// conditional payoffs agreeing a.s. on A.
PayoffSystemVerdict payoff_system_check(const FiniteControlSystem& sys, const SystemTables& tables,
                                        const std::vector<PayoffCase>& cases);

}  // namespace bellman::control
