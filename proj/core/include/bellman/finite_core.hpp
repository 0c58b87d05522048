#pragma once

// Exact measure theory on a finite sample space. Sigma-fields are stored as
// their atom partitions; measures and random variables carry exact rationals.

#include "bellman/rational.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bellman::finite {

/// Indicator mask over the outcomes of a sample space.
using Event = std::vector<bool>;

class SampleSpace {
public:
    /// Labels must be nonempty and pairwise distinct.
    explicit SampleSpace(std::vector<std::string> labels);

    /// Outcomes labelled "w0", "w1", ...
    static SampleSpace indexed(std::size_t n);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::string& label(std::size_t i) const { return labels_.at(i); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::optional<std::size_t> index_of(std::string_view label) const;

    friend bool operator==(const SampleSpace&, const SampleSpace&) = default;

private:
    std::vector<std::string> labels_;
};

class RandomVariable {
public:
    RandomVariable() = default;
    explicit RandomVariable(std::vector<Rational> values) : values_(std::move(values)) {}

    static RandomVariable constant(std::size_t n, const Rational& value);
    static RandomVariable indicator(const Event& event);

    std::size_t size() const noexcept { return values_.size(); }
    const Rational& operator[](std::size_t i) const { return values_[i]; }
    Rational& operator[](std::size_t i) { return values_[i]; }
    const std::vector<Rational>& values() const noexcept { return values_; }

    friend bool operator==(const RandomVariable&, const RandomVariable&) = default;

private:
    std::vector<Rational> values_;
};

class ProbMeasure {
public:
    /// Weights must be nonnegative and sum to exactly one.
    explicit ProbMeasure(std::vector<Rational> weights);

    static ProbMeasure uniform(std::size_t n);

    std::size_t size() const noexcept { return weights_.size(); }
    const Rational& weight(std::size_t i) const { return weights_.at(i); }
    const std::vector<Rational>& weights() const noexcept { return weights_; }
    bool is_null(std::size_t i) const { return weights_.at(i) == 0; }

    Rational probability(const Event& event) const;
    Rational expectation(const RandomVariable& x) const;

    friend bool operator==(const ProbMeasure&, const ProbMeasure&) = default;

private:
    std::vector<Rational> weights_;
};

/// A sigma-field on {0..n-1}, held as the canonical labelling of its atoms:
/// atom ids are assigned in order of each atom's least outcome, so two
/// sigma-fields are equal exactly when their labellings are equal.
class SigmaField {
public:
    SigmaField() = default;

    static SigmaField trivial(std::size_t n);
    static SigmaField discrete(std::size_t n);
    /// Blocks must be nonempty, disjoint and cover {0..n-1}.
    static SigmaField from_blocks(std::size_t n, const std::vector<std::vector<std::size_t>>& blocks);
    /// Any labelling; outcomes with equal labels share an atom.
    static SigmaField from_labels(std::span<const std::size_t> labels);

    std::size_t outcome_count() const noexcept { return atom_of_.size(); }
    std::size_t atom_count() const noexcept { return atoms_; }
    std::size_t atom_of(std::size_t outcome) const { return atom_of_.at(outcome); }
    const std::vector<std::size_t>& labelling() const noexcept { return atom_of_; }
    std::vector<std::vector<std::size_t>> atoms() const;

    /// True when `event` is a union of atoms.
    bool contains(const Event& event) const;
    /// True when every atom of this field is a union of atoms of `finer`.
    bool is_coarser_than(const SigmaField& finer) const;
    bool measures(const RandomVariable& x) const;

    /// Trace on `event`: atoms intersected with the event; all outcomes outside
    /// the event are lumped into a single extra block, so traces on the same
    /// event compare equal exactly when the restricted partitions agree.
    SigmaField trace(const Event& event) const;

    /// Event assembled from the atoms whose bit is set in `mask` (atom count <= 63).
    Event union_of_atoms(unsigned long long mask) const;

    friend bool operator==(const SigmaField&, const SigmaField&) = default;

private:
    std::vector<std::size_t> atom_of_;
    std::size_t atoms_ = 0;
};

class Filtration {
public:
    Filtration() = default;
    /// Stages must share one outcome count and be nondecreasing.
    explicit Filtration(std::vector<SigmaField> stages);

    static Filtration constant(const SigmaField& field, std::size_t horizon);

    std::size_t horizon() const noexcept { return stages_.size() - 1; }
    std::size_t outcome_count() const noexcept { return stages_.front().outcome_count(); }
    const SigmaField& stage(std::size_t t) const { return stages_.at(t); }
    /// The terminal field, standing in for the field at infinity.
    const SigmaField& terminal() const { return stages_.back(); }
    const std::vector<SigmaField>& stages() const noexcept { return stages_; }

    friend bool operator==(const Filtration&, const Filtration&) = default;

private:
    std::vector<SigmaField> stages_;
};

/// Coarsest sigma-field making every variable measurable.
SigmaField sigma_generated(const SampleSpace& space, std::span<const RandomVariable> variables);

/// Common refinement a v b.
SigmaField refine(const SigmaField& a, const SigmaField& b);

/// Atom averages; null atoms are assigned 0.
RandomVariable cond_exp(const ProbMeasure& mu, const RandomVariable& x, const SigmaField& g);

/// Pointwise maximum, which is a version of the essential supremum.
RandomVariable ess_sup(const ProbMeasure& mu, std::span<const RandomVariable> family);

/// Equality on every outcome of positive weight.
bool as_equal(const ProbMeasure& mu, const RandomVariable& x, const RandomVariable& y);
/// x <= y on every outcome of positive weight.
bool as_less_equal(const ProbMeasure& mu, const RandomVariable& x, const RandomVariable& y);

/// Completion by the null outcomes: every null outcome becomes its own atom.
SigmaField complete(const SigmaField& g, const ProbMeasure& mu);
/// Equality of the mu-completions.
bool as_equal_fields(const ProbMeasure& mu, const SigmaField& a, const SigmaField& b);
/// Agreement of two measures on every atom of g.
bool measures_agree_on(const ProbMeasure& p, const ProbMeasure& q, const SigmaField& g);

/// The (eps, M)-upwards-lattice property of a finite family; `cap` empty means M = +inf.
bool has_upwards_lattice_property(const ProbMeasure& mu, std::span<const RandomVariable> family,
                                  const Rational& eps, const std::optional<Rational>& cap);

/// Whether conditioning commutes with the essential supremum of the family:
/// E[ess sup X | g] = ess sup E[X | g] a.s. The lattice hypothesis that makes this
/// hold is the caller's to establish; eps >= 0 and m > 0 are validated only.
bool esssup_exchange_holds(const ProbMeasure& mu, std::span<const RandomVariable> family, const SigmaField& g,
                           const Rational& eps, const Rational& m);

/// Every 2^k union of the atoms of g (k <= 20).
std::vector<Event> enumerate_events(const SigmaField& g);

}  // namespace bellman::finite
