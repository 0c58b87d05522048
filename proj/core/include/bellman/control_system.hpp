#pragma once

// Finite stochastic control systems: controls with their own filtrations,
// measures and payoffs, control times, and the classes D(c,S).

#include "bellman/finite_core.hpp"
#include "bellman/process_algebra.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace bellman::control {

using finite::Event;
using finite::Filtration;
using finite::ProbMeasure;
using finite::RandomVariable;
using finite::SampleSpace;
using finite::SigmaField;
using process::DiscreteProcess;
using process::kInfinity;
using process::RandomTime;
using process::Time;

struct Control {
    std::string id;
    Filtration filtration;
    ProbMeasure measure;
    RandomVariable payoff;
    /// Observed process generating the filtration, when the control was declared that way.
    std::optional<DiscreteProcess> observed;
};

struct ControlTime {
    std::string id;
    /// S^c, indexed like the controls.
    std::vector<RandomTime> per_control;
};

/// D(c,S) for one control time. Controls point into a pool of member lists so
/// that large classes are stored once; lists are sorted control indices.
class ClassTable {
public:
    ClassTable() = default;
    /// One explicit member list per control.
    static ClassTable from_lists(const std::vector<std::vector<std::size_t>>& per_control);
    /// Controls with equal labels form one class.
    static ClassTable from_labels(const std::vector<std::size_t>& labels);

    std::size_t control_count() const noexcept { return list_of_.size(); }
    const std::vector<std::size_t>& members(std::size_t c) const { return lists_.at(list_of_.at(c)); }
    /// Identifier of the member list used by c; equal ids mean equal classes.
    std::size_t list_id(std::size_t c) const { return list_of_.at(c); }
    std::size_t list_count() const noexcept { return lists_.size(); }
    const std::vector<std::size_t>& list(std::size_t id) const { return lists_.at(id); }
    bool contains(std::size_t c, std::size_t d) const;

    friend bool operator==(const ClassTable&, const ClassTable&) = default;

private:
    std::vector<std::vector<std::size_t>> lists_;
    std::vector<std::size_t> list_of_;
};

struct FiniteControlSystem {
    SampleSpace space{std::vector<std::string>{"w0"}};
    std::size_t horizon = 0;
    std::vector<Control> controls;
    std::vector<ControlTime> times;
    /// classes[s] is D(., S) for times[s].
    std::vector<ClassTable> classes;

    std::size_t control_count() const noexcept { return controls.size(); }
    std::size_t time_count() const noexcept { return times.size(); }
    std::optional<std::size_t> find_control(const std::string& id) const;
    std::optional<std::size_t> find_time(const std::string& id) const;
    /// Index of a time identically 0 (or identically infinity) for every control.
    std::optional<std::size_t> zero_time() const;
    std::optional<std::size_t> infinity_time() const;
};

/// Adds the times 0 (class C) and infinity (class {c}) when absent.
FiniteControlSystem with_extremal_times(FiniteControlSystem sys);

/// Deterministic time t for every control.
ControlTime deterministic_time(std::string id, std::size_t controls, std::size_t outcomes, Time t);

/// D(c,S) = {c} when S^c is identically infinity; otherwise the controls whose
/// observed processes agree with that of c up to S^c on every outcome charged
/// by P^c or P^d. Every control must carry an observed process.
ClassTable derive_prefix_classes(const FiniteControlSystem& sys, std::size_t time);

/// S^c as a stopping time of G^c: S^c itself, or its a.s. stopping version.
/// Throws PreconditionError if neither exists.
RandomTime stopping_version(const FiniteControlSystem& sys, std::size_t c, std::size_t s);

/// G^c_{S^c}.
SigmaField stopped_field(const FiniteControlSystem& sys, std::size_t c, std::size_t s);

/// S^d <= T^d P^d-a.s. for every d in D(c,T).
bool classwise_le(const FiniteControlSystem& sys, std::size_t c, std::size_t s, std::size_t t);

/// classwise_le memoized on the member list of D(c,T).
class ClasswiseOrder {
public:
    explicit ClasswiseOrder(const FiniteControlSystem& sys) : sys_(&sys) {}
    bool le(std::size_t c, std::size_t s, std::size_t t);

private:
    const FiniteControlSystem* sys_;
    std::map<std::tuple<std::size_t, std::size_t, std::size_t>, bool> cache_;
};

// ------------------------------------------------------------------ validation

struct Witness {
    std::string control;
    std::string other_control;
    std::string time;
    std::string other_time;
    std::optional<std::size_t> outcome;
    std::string lhs;
    std::string rhs;
    std::string detail;
};

struct RuleVerdict {
    std::string rule;
    bool passed = true;
    std::size_t checked = 0;
    /// At most kWitnessCap are kept; `violations` counts all.
    std::size_t violations = 0;
    std::vector<Witness> witnesses;

    static constexpr std::size_t kWitnessCap = 20;
    void fail(Witness w);
};

struct ValidationReport {
    std::vector<RuleVerdict> rules;
    bool passed() const;
    const RuleVerdict* find(const std::string& rule) const;
};

/// Structure, control-time, initial-field, the seven dynamics axioms and
/// stability under stopping, checked exhaustively.
ValidationReport validate(const FiniteControlSystem& sys);

}  // namespace bellman::control
