#include "bellman/finite_core.hpp"

#include "bellman/detail/partition.hpp"
#include "bellman/errors.hpp"

#include <algorithm>
#include <set>

namespace bellman::finite {

namespace {

void require_size(std::size_t expected, std::size_t actual, const char* what) {
    if (expected != actual) {
        throw DimensionError(std::string(what) + ": expected " + std::to_string(expected) + " outcomes, got " +
                             std::to_string(actual));
    }
}

}  // namespace

// ---------------------------------------------------------------- SampleSpace

SampleSpace::SampleSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
    if (labels_.empty()) throw DomainError("sample space must contain at least one outcome");
    std::set<std::string_view> seen;
    for (const auto& l : labels_) {
        if (!seen.insert(l).second) throw DomainError("duplicate outcome label \"" + l + "\"");
    }
}

SampleSpace SampleSpace::indexed(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back("w" + std::to_string(i));
    return SampleSpace(std::move(labels));
}

std::optional<std::size_t> SampleSpace::index_of(std::string_view label) const {
    const auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - labels_.begin());
}

// ------------------------------------------------------------- RandomVariable

RandomVariable RandomVariable::constant(std::size_t n, const Rational& value) {
    return RandomVariable(std::vector<Rational>(n, value));
}

RandomVariable RandomVariable::indicator(const Event& event) {
    std::vector<Rational> v(event.size());
    for (std::size_t i = 0; i < event.size(); ++i) v[i] = event[i] ? 1 : 0;
    return RandomVariable(std::move(v));
}

// ---------------------------------------------------------------- ProbMeasure

ProbMeasure::ProbMeasure(std::vector<Rational> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw DomainError("measure on an empty space");
    Rational total = 0;
    for (const auto& w : weights_) {
        if (w < 0) throw DomainError("negative weight " + to_string(w));
        total += w;
    }
    if (total != 1) throw DomainError("weights sum to " + to_string(total) + ", not 1");
}

ProbMeasure ProbMeasure::uniform(std::size_t n) {
    return ProbMeasure(std::vector<Rational>(n, Rational(1, static_cast<unsigned long>(n))));
}

Rational ProbMeasure::probability(const Event& event) const {
    require_size(size(), event.size(), "probability");
    Rational p = 0;
    for (std::size_t i = 0; i < event.size(); ++i) {
        if (event[i]) p += weights_[i];
    }
    return p;
}

Rational ProbMeasure::expectation(const RandomVariable& x) const {
    require_size(size(), x.size(), "expectation");
    Rational e = 0;
    for (std::size_t i = 0; i < x.size(); ++i) e += weights_[i] * x[i];
    return e;
}

// ----------------------------------------------------------------- SigmaField

SigmaField SigmaField::trivial(std::size_t n) {
    SigmaField g;
    g.atom_of_.assign(n, 0);
    g.atoms_ = n == 0 ? 0 : 1;
    return g;
}

SigmaField SigmaField::discrete(std::size_t n) {
    SigmaField g;
    g.atom_of_.resize(n);
    for (std::size_t i = 0; i < n; ++i) g.atom_of_[i] = i;
    g.atoms_ = n;
    return g;
}

SigmaField SigmaField::from_labels(std::span<const std::size_t> labels) {
    SigmaField g;
    g.atom_of_ = detail::group_by_key(std::vector<std::size_t>(labels.begin(), labels.end()));
    g.atoms_ = g.atom_of_.empty() ? 0 : *std::max_element(g.atom_of_.begin(), g.atom_of_.end()) + 1;
    return g;
}

SigmaField SigmaField::from_blocks(std::size_t n, const std::vector<std::vector<std::size_t>>& blocks) {
    constexpr std::size_t unassigned = static_cast<std::size_t>(-1);
    std::vector<std::size_t> labels(n, unassigned);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (blocks[b].empty()) throw DomainError("empty atom in partition");
        for (auto w : blocks[b]) {
            if (w >= n) throw DimensionError("outcome index " + std::to_string(w) + " out of range");
            if (labels[w] != unassigned) throw DomainError("outcome " + std::to_string(w) + " in two atoms");
            labels[w] = b;
        }
    }
    for (std::size_t w = 0; w < n; ++w) {
        if (labels[w] == unassigned) throw DomainError("outcome " + std::to_string(w) + " not covered by any atom");
    }
    return from_labels(labels);
}

std::vector<std::vector<std::size_t>> SigmaField::atoms() const {
    std::vector<std::vector<std::size_t>> out(atoms_);
    for (std::size_t w = 0; w < atom_of_.size(); ++w) out[atom_of_[w]].push_back(w);
    return out;
}

bool SigmaField::contains(const Event& event) const {
    require_size(outcome_count(), event.size(), "contains");
    // -1 unknown, 0 outside, 1 inside
    std::vector<int> state(atoms_, -1);
    for (std::size_t w = 0; w < event.size(); ++w) {
        const int bit = event[w] ? 1 : 0;
        int& s = state[atom_of_[w]];
        if (s == -1) {
            s = bit;
        } else if (s != bit) {
            return false;
        }
    }
    return true;
}

bool SigmaField::is_coarser_than(const SigmaField& finer) const {
    require_size(outcome_count(), finer.outcome_count(), "is_coarser_than");
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> parent(finer.atoms_, unset);
    for (std::size_t w = 0; w < atom_of_.size(); ++w) {
        auto& p = parent[finer.atom_of_[w]];
        if (p == unset) {
            p = atom_of_[w];
        } else if (p != atom_of_[w]) {
            return false;
        }
    }
    return true;
}

bool SigmaField::measures(const RandomVariable& x) const {
    require_size(outcome_count(), x.size(), "measures");
    std::vector<const Rational*> seen(atoms_, nullptr);
    for (std::size_t w = 0; w < x.size(); ++w) {
        auto& s = seen[atom_of_[w]];
        if (s == nullptr) {
            s = &x[w];
        } else if (*s != x[w]) {
            return false;
        }
    }
    return true;
}

SigmaField SigmaField::trace(const Event& event) const {
    require_size(outcome_count(), event.size(), "trace");
    std::vector<std::size_t> labels(atom_of_.size());
    for (std::size_t w = 0; w < atom_of_.size(); ++w) labels[w] = event[w] ? atom_of_[w] : atoms_;
    return from_labels(labels);
}

Event SigmaField::union_of_atoms(unsigned long long mask) const {
    if (atoms_ > 63) throw DomainError("too many atoms to enumerate by mask");
    Event e(atom_of_.size());
    for (std::size_t w = 0; w < atom_of_.size(); ++w) e[w] = ((mask >> atom_of_[w]) & 1ULL) != 0;
    return e;
}

// ----------------------------------------------------------------- Filtration

Filtration::Filtration(std::vector<SigmaField> stages) : stages_(std::move(stages)) {
    if (stages_.empty()) throw DomainError("filtration needs at least one stage");
    for (std::size_t t = 1; t < stages_.size(); ++t) {
        require_size(stages_[0].outcome_count(), stages_[t].outcome_count(), "filtration stage");
        if (!stages_[t - 1].is_coarser_than(stages_[t])) {
            throw DomainError("filtration decreases between stages " + std::to_string(t - 1) + " and " +
                              std::to_string(t));
        }
    }
}

Filtration Filtration::constant(const SigmaField& field, std::size_t horizon) {
    return Filtration(std::vector<SigmaField>(horizon + 1, field));
}

// ----------------------------------------------------------------- operations

SigmaField sigma_generated(const SampleSpace& space, std::span<const RandomVariable> variables) {
    const std::size_t n = space.size();
    for (const auto& v : variables) require_size(n, v.size(), "sigma_generated");
    std::vector<std::vector<Rational>> keys(n);
    for (std::size_t w = 0; w < n; ++w) {
        keys[w].reserve(variables.size());
        for (const auto& v : variables) keys[w].push_back(v[w]);
    }
    return SigmaField::from_labels(detail::group_by_key(keys));
}

SigmaField refine(const SigmaField& a, const SigmaField& b) {
    require_size(a.outcome_count(), b.outcome_count(), "refine");
    std::vector<std::pair<std::size_t, std::size_t>> keys(a.outcome_count());
    for (std::size_t w = 0; w < keys.size(); ++w) keys[w] = {a.atom_of(w), b.atom_of(w)};
    return SigmaField::from_labels(detail::group_by_key(keys));
}

RandomVariable cond_exp(const ProbMeasure& mu, const RandomVariable& x, const SigmaField& g) {
    require_size(mu.size(), x.size(), "cond_exp");
    require_size(mu.size(), g.outcome_count(), "cond_exp");
    std::vector<Rational> mass(g.atom_count()), moment(g.atom_count());
    for (std::size_t w = 0; w < x.size(); ++w) {
        mass[g.atom_of(w)] += mu.weight(w);
        moment[g.atom_of(w)] += mu.weight(w) * x[w];
    }
    std::vector<Rational> out(x.size());
    for (std::size_t w = 0; w < x.size(); ++w) {
        const auto a = g.atom_of(w);
        out[w] = mass[a] == 0 ? Rational(0) : Rational(moment[a] / mass[a]);
    }
    return RandomVariable(std::move(out));
}

RandomVariable ess_sup(const ProbMeasure& mu, std::span<const RandomVariable> family) {
    if (family.empty()) throw DomainError("essential supremum of an empty family");
    RandomVariable out = family.front();
    require_size(mu.size(), out.size(), "ess_sup");
    for (const auto& x : family.subspan(1)) {
        require_size(mu.size(), x.size(), "ess_sup");
        for (std::size_t w = 0; w < x.size(); ++w) {
            if (x[w] > out[w]) out[w] = x[w];
        }
    }
    return out;
}

bool as_equal(const ProbMeasure& mu, const RandomVariable& x, const RandomVariable& y) {
    require_size(mu.size(), x.size(), "as_equal");
    require_size(mu.size(), y.size(), "as_equal");
    for (std::size_t w = 0; w < x.size(); ++w) {
        if (!mu.is_null(w) && x[w] != y[w]) return false;
    }
    return true;
}

bool as_less_equal(const ProbMeasure& mu, const RandomVariable& x, const RandomVariable& y) {
    require_size(mu.size(), x.size(), "as_less_equal");
    require_size(mu.size(), y.size(), "as_less_equal");
    for (std::size_t w = 0; w < x.size(); ++w) {
        if (!mu.is_null(w) && x[w] > y[w]) return false;
    }
    return true;
}

SigmaField complete(const SigmaField& g, const ProbMeasure& mu) {
    require_size(mu.size(), g.outcome_count(), "complete");
    std::vector<std::size_t> labels(g.outcome_count());
    for (std::size_t w = 0; w < labels.size(); ++w) {
        labels[w] = mu.is_null(w) ? g.atom_count() + w : g.atom_of(w);
    }
    return SigmaField::from_labels(labels);
}

bool as_equal_fields(const ProbMeasure& mu, const SigmaField& a, const SigmaField& b) {
    return complete(a, mu) == complete(b, mu);
}

bool measures_agree_on(const ProbMeasure& p, const ProbMeasure& q, const SigmaField& g) {
    require_size(p.size(), q.size(), "measures_agree_on");
    std::vector<Rational> mp(g.atom_count()), mq(g.atom_count());
    for (std::size_t w = 0; w < p.size(); ++w) {
        mp[g.atom_of(w)] += p.weight(w);
        mq[g.atom_of(w)] += q.weight(w);
    }
    return mp == mq;
}

bool has_upwards_lattice_property(const ProbMeasure& mu, std::span<const RandomVariable> family,
                                  const Rational& eps, const std::optional<Rational>& cap) {
    auto capped = [&](const Rational& v) { return cap && *cap < v ? *cap : v; };
    for (const auto& a : family) {
        for (const auto& b : family) {
            bool found = false;
            for (const auto& c : family) {
                bool dominates = true;
                for (std::size_t w = 0; w < mu.size() && dominates; ++w) {
                    if (mu.is_null(w)) continue;
                    const Rational target = std::max(capped(a[w]), capped(b[w])) - eps;
                    dominates = c[w] >= target;
                }
                if (dominates) {
                    found = true;
                    break;
                }
            }
            if (!found) return false;
        }
    }
    return true;
}

bool esssup_exchange_holds(const ProbMeasure& mu, std::span<const RandomVariable> family, const SigmaField& g,
                           const Rational& eps, const Rational& m) {
    if (eps < 0) throw PreconditionError("eps must be nonnegative");
    if (m <= 0) throw PreconditionError("M must be positive");
    const auto lhs = cond_exp(mu, ess_sup(mu, family), g);
    std::vector<RandomVariable> conditioned;
    conditioned.reserve(family.size());
    for (const auto& x : family) conditioned.push_back(cond_exp(mu, x, g));
    return as_equal(mu, lhs, ess_sup(mu, conditioned));
}

std::vector<Event> enumerate_events(const SigmaField& g) {
    if (g.atom_count() > 20) throw DomainError("refusing to enumerate 2^" + std::to_string(g.atom_count()) + " events");
    std::vector<Event> out;
    const unsigned long long total = 1ULL << g.atom_count();
    out.reserve(total);
    for (unsigned long long mask = 0; mask < total; ++mask) out.push_back(g.union_of_atoms(mask));
    return out;
}

}  // namespace bellman::finite
