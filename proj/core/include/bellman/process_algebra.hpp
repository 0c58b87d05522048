#pragma once

// Discrete-time processes on a finite sample space: natural filtrations,
// stopped processes, stopping times and the filtration at a stopping time.

#include "bellman/finite_core.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace bellman::process {

using finite::Event;
using finite::Filtration;
using finite::ProbMeasure;
using finite::RandomVariable;
using finite::SigmaField;

using Time = std::size_t;

/// The value "infinity" of a random time. It is kept distinct from the horizon;
/// the field at infinity is the terminal stage.
inline constexpr Time kInfinity = std::numeric_limits<Time>::max();

std::string time_to_string(Time t);

class RandomTime {
public:
    RandomTime() = default;
    explicit RandomTime(std::vector<Time> values) : values_(std::move(values)) {}

    static RandomTime constant(std::size_t n, Time t) { return RandomTime(std::vector<Time>(n, t)); }

    std::size_t size() const noexcept { return values_.size(); }
    Time operator[](std::size_t i) const { return values_[i]; }
    Time& operator[](std::size_t i) { return values_[i]; }
    const std::vector<Time>& values() const noexcept { return values_; }

    /// {S <= t}
    Event at_most(Time t) const;
    /// {S = t}
    Event equal_to(Time t) const;
    std::optional<Time> deterministic_value() const;

    friend bool operator==(const RandomTime&, const RandomTime&) = default;

private:
    std::vector<Time> values_;
};

/// Pointwise minimum and maximum.
RandomTime min(const RandomTime& a, const RandomTime& b);
RandomTime max(const RandomTime& a, const RandomTime& b);
bool pointwise_le(const RandomTime& a, const RandomTime& b);
/// a <= b on every outcome of positive weight.
bool as_le(const ProbMeasure& mu, const RandomTime& a, const RandomTime& b);
bool as_equal(const ProbMeasure& mu, const RandomTime& a, const RandomTime& b);

/// Values indexed by (outcome, time), times 0..horizon.
class DiscreteProcess {
public:
    DiscreteProcess() = default;
    /// Every row must have the same, nonzero length.
    explicit DiscreteProcess(std::vector<std::vector<Rational>> rows);

    std::size_t outcome_count() const noexcept { return rows_.size(); }
    std::size_t horizon() const noexcept { return rows_.empty() ? 0 : rows_.front().size() - 1; }
    const Rational& at(std::size_t outcome, std::size_t t) const { return rows_.at(outcome).at(t); }
    const std::vector<Rational>& row(std::size_t outcome) const { return rows_.at(outcome); }
    const std::vector<std::vector<Rational>>& rows() const noexcept { return rows_; }
    /// The coordinate X_t as a random variable.
    RandomVariable coordinate(std::size_t t) const;

    friend bool operator==(const DiscreteProcess&, const DiscreteProcess&) = default;

private:
    std::vector<std::vector<Rational>> rows_;
};

/// F^X_t = sigma(X_0, ..., X_t).
Filtration natural_filtration(const DiscreteProcess& x);

/// X^S_t = X_{min(S,t)}.
DiscreteProcess stop_process(const DiscreteProcess& x, const RandomTime& s);

/// sigma(X) with X viewed as a path-valued variable.
SigmaField sigma_of_process(const DiscreteProcess& x);

/// {S <= t} is a union of atoms of stage t for every t <= horizon. Values
/// beyond the horizon other than infinity are rejected.
bool is_stopping_time(const RandomTime& s, const Filtration& f);

/// G_S = {A in G_inf : A and {S <= t} in G_t for all t}. Throws
/// PreconditionError unless s is a stopping time of f.
SigmaField sigma_at(const Filtration& f, const RandomTime& s);

/// The admissible events {A in G_inf : A and {S <= t} in G_t for all t}, by
/// enumeration of every atom-union. Meaningful for arbitrary times.
std::vector<Event> stopping_field_events(const Filtration& f, const RandomTime& s);

/// sigma_at by exhaustive enumeration; an independent cross-check (at most 20 terminal atoms).
SigmaField sigma_at_bruteforce(const Filtration& f, const RandomTime& s);

/// (S is an F^X stopping time, S is an F^{X^S} stopping time).
std::pair<bool, bool> stopping_time_equivalence(const DiscreteProcess& x, const RandomTime& s);

struct GalmarinoReport {
    /// sigma(X^S) == F^X_S
    bool fields_equal = false;
    /// Over every A in F^X_inf: (A in F^X_S) <=> (1_A constant on level sets of X^S) <=> (A in sigma(X^S)).
    bool characterization_agrees = false;
    std::size_t events_checked = 0;
    SigmaField stopped_field;
    SigmaField generated_field;
    /// Separability and Hausdorff side conditions hold automatically for
    /// finitely many rational values.
    std::string note;
};

GalmarinoReport galmarino_check(const DiscreteProcess& x, const RandomTime& s);

/// With X^S = Y^S and S a stopping time of F^X or F^Y: F^X_S == F^Y_S.
bool observational_consistency(const DiscreteProcess& x, const DiscreteProcess& y, const RandomTime& s);

/// With U <= V stopping times of F^Z: sigma(Z^U) is coarser than sigma(Z^V).
bool information_monotone(const DiscreteProcess& z, const RandomTime& u, const RandomTime& v);

/// Completion of every stage.
Filtration complete(const Filtration& f, const ProbMeasure& mu);

/// A stopping time of f equal to s mu-a.s., if s is a stopping time of the
/// completed filtration; nullopt otherwise.
std::optional<RandomTime> as_stopping_version(const Filtration& f, const ProbMeasure& mu, const RandomTime& s);

struct CompletedConsistency {
    bool holds = false;
    /// completed F^X at S == completion of sigma(X^U), U the stopping version
    bool x_galmarino = false;
    bool y_galmarino = false;
    /// completion of sigma(X^U) == completion of sigma(Y^V)
    bool stopped_fields_agree = false;
    /// stopped field of the completed filtration == completion of F^X_U
    bool stopping_version_invariant = false;
};

/// The completed form of observational consistency. Throws PreconditionError
/// if X^S and Y^S differ on a non-null outcome or s has no stopping version.
CompletedConsistency as_variants_check(const ProbMeasure& mu, const DiscreteProcess& x, const DiscreteProcess& y,
                                       const RandomTime& s);

/// Checks G_inf|A == join of G_{S_n}|A for stopping times S_n whose maximum
/// reaches the horizon on A. Throws PreconditionError if some S_n is not a
/// stopping time or the sequence stays below the horizon somewhere on A.
bool accesses_infinity_trace_identity(const Filtration& f, const std::vector<RandomTime>& times, const Event& a);

/// First t with pred(X_t), else infinity.
RandomTime first_entrance(const DiscreteProcess& x, const std::function<bool(const Rational&)>& pred);

}  // namespace bellman::process
