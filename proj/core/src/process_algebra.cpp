#include "bellman/process_algebra.hpp"

#include "bellman/detail/partition.hpp"
#include "bellman/errors.hpp"

#include <algorithm>
#include <set>

namespace bellman::process {

namespace {

void require_outcomes(std::size_t expected, std::size_t actual, const char* what) {
    if (expected != actual) {
        throw DimensionError(std::string(what) + ": expected " + std::to_string(expected) + " outcomes, got " +
                             std::to_string(actual));
    }
}

void require_range(const RandomTime& s, std::size_t horizon) {
    for (std::size_t w = 0; w < s.size(); ++w) {
        if (s[w] != kInfinity && s[w] > horizon) {
            throw DomainError("time value " + std::to_string(s[w]) + " at outcome " + std::to_string(w) +
                              " exceeds horizon " + std::to_string(horizon));
        }
    }
}

Event intersect(const Event& a, const Event& b) {
    Event out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
    return out;
}

SigmaField partition_by_rows(const std::vector<std::vector<Rational>>& rows) {
    return SigmaField::from_labels(detail::group_by_key(rows));
}

bool admissible(const Filtration& f, const RandomTime& s, const Event& a) {
    if (!f.terminal().contains(a)) return false;
    for (std::size_t t = 0; t <= f.horizon(); ++t) {
        if (!f.stage(t).contains(intersect(a, s.at_most(t)))) return false;
    }
    return true;
}

}  // namespace

std::string time_to_string(Time t) { return t == kInfinity ? std::string("inf") : std::to_string(t); }

// ----------------------------------------------------------------- RandomTime

Event RandomTime::at_most(Time t) const {
    Event e(values_.size());
    for (std::size_t w = 0; w < values_.size(); ++w) e[w] = values_[w] <= t;
    return e;
}

Event RandomTime::equal_to(Time t) const {
    Event e(values_.size());
    for (std::size_t w = 0; w < values_.size(); ++w) e[w] = values_[w] == t;
    return e;
}

std::optional<Time> RandomTime::deterministic_value() const {
    if (values_.empty()) return std::nullopt;
    for (auto v : values_) {
        if (v != values_.front()) return std::nullopt;
    }
    return values_.front();
}

RandomTime min(const RandomTime& a, const RandomTime& b) {
    require_outcomes(a.size(), b.size(), "min");
    std::vector<Time> v(a.size());
    for (std::size_t w = 0; w < v.size(); ++w) v[w] = std::min(a[w], b[w]);
    return RandomTime(std::move(v));
}

RandomTime max(const RandomTime& a, const RandomTime& b) {
    require_outcomes(a.size(), b.size(), "max");
    std::vector<Time> v(a.size());
    for (std::size_t w = 0; w < v.size(); ++w) v[w] = std::max(a[w], b[w]);
    return RandomTime(std::move(v));
}

bool pointwise_le(const RandomTime& a, const RandomTime& b) {
    require_outcomes(a.size(), b.size(), "pointwise_le");
    for (std::size_t w = 0; w < a.size(); ++w) {
        if (a[w] > b[w]) return false;
    }
    return true;
}

bool as_le(const ProbMeasure& mu, const RandomTime& a, const RandomTime& b) {
    require_outcomes(mu.size(), a.size(), "as_le");
    require_outcomes(mu.size(), b.size(), "as_le");
    for (std::size_t w = 0; w < a.size(); ++w) {
        if (!mu.is_null(w) && a[w] > b[w]) return false;
    }
    return true;
}

bool as_equal(const ProbMeasure& mu, const RandomTime& a, const RandomTime& b) {
    require_outcomes(mu.size(), a.size(), "as_equal");
    require_outcomes(mu.size(), b.size(), "as_equal");
    for (std::size_t w = 0; w < a.size(); ++w) {
        if (!mu.is_null(w) && a[w] != b[w]) return false;
    }
    return true;
}

// ------------------------------------------------------------ DiscreteProcess

DiscreteProcess::DiscreteProcess(std::vector<std::vector<Rational>> rows) : rows_(std::move(rows)) {
    if (rows_.empty()) throw DomainError("process on an empty sample space");
    const auto len = rows_.front().size();
    if (len == 0) throw DomainError("process rows must contain time 0");
    for (std::size_t w = 0; w < rows_.size(); ++w) {
        if (rows_[w].size() != len) {
            throw DimensionError("row " + std::to_string(w) + " has " + std::to_string(rows_[w].size()) +
                                 " entries, expected " + std::to_string(len));
        }
    }
}

RandomVariable DiscreteProcess::coordinate(std::size_t t) const {
    std::vector<Rational> v(rows_.size());
    for (std::size_t w = 0; w < rows_.size(); ++w) v[w] = rows_[w].at(t);
    return RandomVariable(std::move(v));
}

// ----------------------------------------------------------------- operations

Filtration natural_filtration(const DiscreteProcess& x) {
    std::vector<SigmaField> stages;
    stages.reserve(x.horizon() + 1);
    for (std::size_t t = 0; t <= x.horizon(); ++t) {
        std::vector<std::vector<Rational>> prefixes(x.outcome_count());
        for (std::size_t w = 0; w < prefixes.size(); ++w) {
            prefixes[w].assign(x.row(w).begin(), x.row(w).begin() + static_cast<std::ptrdiff_t>(t + 1));
        }
        stages.push_back(partition_by_rows(prefixes));
    }
    return Filtration(std::move(stages));
}

DiscreteProcess stop_process(const DiscreteProcess& x, const RandomTime& s) {
    require_outcomes(x.outcome_count(), s.size(), "stop_process");
    auto rows = x.rows();
    for (std::size_t w = 0; w < rows.size(); ++w) {
        if (s[w] >= x.horizon()) continue;
        for (std::size_t t = s[w] + 1; t <= x.horizon(); ++t) rows[w][t] = rows[w][s[w]];
    }
    return DiscreteProcess(std::move(rows));
}

SigmaField sigma_of_process(const DiscreteProcess& x) { return partition_by_rows(x.rows()); }

bool is_stopping_time(const RandomTime& s, const Filtration& f) {
    require_outcomes(f.outcome_count(), s.size(), "is_stopping_time");
    require_range(s, f.horizon());
    for (std::size_t t = 0; t <= f.horizon(); ++t) {
        if (!f.stage(t).contains(s.at_most(t))) return false;
    }
    return true;
}

SigmaField sigma_at(const Filtration& f, const RandomTime& s) {
    if (!is_stopping_time(s, f)) throw PreconditionError("sigma_at: time is not a stopping time of the filtration");
    std::vector<std::pair<Time, std::size_t>> keys(s.size());
    for (std::size_t w = 0; w < s.size(); ++w) {
        const Time stage = std::min<Time>(s[w], f.horizon());
        keys[w] = {s[w], f.stage(stage).atom_of(w)};
    }
    return SigmaField::from_labels(detail::group_by_key(keys));
}

std::vector<Event> stopping_field_events(const Filtration& f, const RandomTime& s) {
    require_outcomes(f.outcome_count(), s.size(), "stopping_field_events");
    require_range(s, f.horizon());
    std::vector<Event> out;
    for (auto& a : finite::enumerate_events(f.terminal())) {
        if (admissible(f, s, a)) out.push_back(std::move(a));
    }
    return out;
}

SigmaField sigma_at_bruteforce(const Filtration& f, const RandomTime& s) {
    if (!is_stopping_time(s, f)) {
        throw PreconditionError("sigma_at_bruteforce: time is not a stopping time of the filtration");
    }
    const auto events = stopping_field_events(f, s);
    std::vector<std::vector<bool>> membership(s.size());
    for (std::size_t w = 0; w < s.size(); ++w) {
        membership[w].reserve(events.size());
        for (const auto& e : events) membership[w].push_back(e[w]);
    }
    return SigmaField::from_labels(detail::group_by_key(membership));
}

std::pair<bool, bool> stopping_time_equivalence(const DiscreteProcess& x, const RandomTime& s) {
    return {is_stopping_time(s, natural_filtration(x)), is_stopping_time(s, natural_filtration(stop_process(x, s)))};
}

GalmarinoReport galmarino_check(const DiscreteProcess& x, const RandomTime& s) {
    const auto f = natural_filtration(x);
    if (!is_stopping_time(s, f)) throw PreconditionError("galmarino_check: time is not a stopping time of F^X");

    GalmarinoReport report;
    const auto stopped = stop_process(x, s);
    report.stopped_field = sigma_at(f, s);
    report.generated_field = sigma_of_process(stopped);
    report.fields_equal = report.stopped_field == report.generated_field;
    report.note = "separability and Hausdorff conditions hold automatically on a finite space";

    // level sets of X^S, compared by path
    const auto& paths = stopped.rows();
    report.characterization_agrees = true;
    if (f.terminal().atom_count() <= 16) {
        for (const auto& a : finite::enumerate_events(f.terminal())) {
            const bool in_stopped = admissible(f, s, a);
            bool constant_on_levels = true;
            for (std::size_t w = 0; w < a.size() && constant_on_levels; ++w) {
                for (std::size_t v = w + 1; v < a.size(); ++v) {
                    if (paths[w] == paths[v] && a[w] != a[v]) {
                        constant_on_levels = false;
                        break;
                    }
                }
            }
            const bool in_generated = report.generated_field.contains(a);
            ++report.events_checked;
            if (in_stopped != constant_on_levels || constant_on_levels != in_generated) {
                report.characterization_agrees = false;
            }
        }
    } else {
        report.note += "; event enumeration skipped (more than 16 terminal atoms)";
        report.characterization_agrees = report.fields_equal;
    }
    return report;
}

bool observational_consistency(const DiscreteProcess& x, const DiscreteProcess& y, const RandomTime& s) {
    if (stop_process(x, s) != stop_process(y, s)) {
        throw PreconditionError("observational_consistency: stopped processes differ");
    }
    const auto fx = natural_filtration(x);
    const auto fy = natural_filtration(y);
    const bool sx = is_stopping_time(s, fx);
    const bool sy = is_stopping_time(s, fy);
    if (!sx && !sy) throw PreconditionError("observational_consistency: time is a stopping time of neither filtration");
    if (!sx || !sy) return false;
    return sigma_at(fx, s) == sigma_at(fy, s);
}

bool information_monotone(const DiscreteProcess& z, const RandomTime& u, const RandomTime& v) {
    if (!pointwise_le(u, v)) throw PreconditionError("information_monotone: U <= V fails");
    const auto f = natural_filtration(z);
    if (!is_stopping_time(u, f) || !is_stopping_time(v, f)) {
        throw PreconditionError("information_monotone: U and V must be stopping times of F^Z");
    }
    return sigma_of_process(stop_process(z, u)).is_coarser_than(sigma_of_process(stop_process(z, v)));
}

Filtration complete(const Filtration& f, const ProbMeasure& mu) {
    std::vector<SigmaField> stages;
    stages.reserve(f.stages().size());
    for (const auto& g : f.stages()) stages.push_back(finite::complete(g, mu));
    return Filtration(std::move(stages));
}

std::optional<RandomTime> as_stopping_version(const Filtration& f, const ProbMeasure& mu, const RandomTime& s) {
    require_outcomes(f.outcome_count(), s.size(), "as_stopping_version");
    require_outcomes(f.outcome_count(), mu.size(), "as_stopping_version");
    require_range(s, f.horizon());
    std::vector<Time> version(s.size(), kInfinity);
    for (std::size_t m = 0; m <= f.horizon(); ++m) {
        for (const auto& atom : f.stage(m).atoms()) {
            bool has_mass = false;
            bool inside = true;
            for (auto w : atom) {
                if (mu.is_null(w)) continue;
                has_mass = true;
                if (s[w] != m) inside = false;
            }
            if (!has_mass || !inside) continue;
            for (auto w : atom) {
                if (version[w] == kInfinity) version[w] = m;
            }
        }
    }
    RandomTime out(std::move(version));
    if (!is_stopping_time(out, f) || !as_equal(mu, out, s)) return std::nullopt;
    return out;
}

CompletedConsistency as_variants_check(const ProbMeasure& mu, const DiscreteProcess& x, const DiscreteProcess& y,
                                       const RandomTime& s) {
    require_outcomes(mu.size(), x.outcome_count(), "as_variants_check");
    require_outcomes(mu.size(), y.outcome_count(), "as_variants_check");
    const auto xs = stop_process(x, s);
    const auto ys = stop_process(y, s);
    for (std::size_t w = 0; w < mu.size(); ++w) {
        if (!mu.is_null(w) && xs.row(w) != ys.row(w)) {
            throw PreconditionError("as_variants_check: X^S and Y^S differ on outcome " + std::to_string(w));
        }
    }
    const auto fx = natural_filtration(x);
    const auto fy = natural_filtration(y);
    const auto u = as_stopping_version(fx, mu, s);
    const auto v = as_stopping_version(fy, mu, s);
    if (!u || !v) throw PreconditionError("as_variants_check: time is not a.s. equal to a stopping time");

    CompletedConsistency r;
    const auto gx = finite::complete(sigma_of_process(stop_process(x, *u)), mu);
    const auto gy = finite::complete(sigma_of_process(stop_process(y, *v)), mu);
    const auto sx = finite::complete(sigma_at(fx, *u), mu);
    const auto sy = finite::complete(sigma_at(fy, *v), mu);
    r.x_galmarino = sx == gx;
    r.y_galmarino = sy == gy;
    r.stopped_fields_agree = gx == gy;

    const auto cx = complete(fx, mu);
    const auto cy = complete(fy, mu);
    r.stopping_version_invariant =
        is_stopping_time(s, cx) && is_stopping_time(s, cy) && sigma_at(cx, s) == sx && sigma_at(cy, s) == sy;
    r.holds = r.x_galmarino && r.y_galmarino && r.stopped_fields_agree && r.stopping_version_invariant;
    return r;
}

bool accesses_infinity_trace_identity(const Filtration& f, const std::vector<RandomTime>& times, const Event& a) {
    require_outcomes(f.outcome_count(), a.size(), "accesses_infinity_trace_identity");
    for (const auto& s : times) {
        if (!is_stopping_time(s, f)) throw PreconditionError("accesses_infinity_trace_identity: not a stopping time");
    }
    for (std::size_t w = 0; w < a.size(); ++w) {
        if (!a[w]) continue;
        bool reaches = false;
        for (const auto& s : times) reaches = reaches || s[w] >= f.horizon();
        if (!reaches) {
            throw PreconditionError("accesses_infinity_trace_identity: sequence stays below the horizon at outcome " +
                                    std::to_string(w));
        }
    }
    const auto lhs = f.terminal().trace(a);
    auto rhs = SigmaField::trivial(f.outcome_count()).trace(a);
    for (const auto& s : times) rhs = finite::refine(rhs, sigma_at(f, s).trace(a));
    return lhs == rhs;
}

RandomTime first_entrance(const DiscreteProcess& x, const std::function<bool(const Rational&)>& pred) {
    std::vector<Time> v(x.outcome_count(), kInfinity);
    for (std::size_t w = 0; w < v.size(); ++w) {
        for (std::size_t t = 0; t <= x.horizon(); ++t) {
            if (pred(x.at(w, t))) {
                v[w] = t;
                break;
            }
        }
    }
    return RandomTime(std::move(v));
}

}  // namespace bellman::process
