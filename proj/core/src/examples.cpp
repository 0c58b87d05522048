#include "bellman/examples.hpp"

#include "bellman/errors.hpp"

#include <functional>
#include <map>

namespace bellman::examples {

using control::ClassTable;
using control::Control;
using control::ControlTime;
using finite::SampleSpace;
using finite::SigmaField;
using process::kInfinity;
using process::RandomTime;
using process::Time;

namespace {

const std::vector<Rational> kY1{0, 0, 1, 1};
const std::vector<Rational> kY2{-1, 1, -1, 1};

const Rational& box(int which, std::size_t w) { return which == 1 ? kY1[w] : kY2[w]; }

/// Labels controls by the key each one produces; equal keys share a class.
template <typename Key>
ClassTable classes_by_key(const std::vector<Key>& keys) {
    std::map<Key, std::size_t> ids;
    std::vector<std::size_t> labels;
    labels.reserve(keys.size());
    for (const auto& key : keys) labels.push_back(ids.emplace(key, ids.size()).first->second);
    return ClassTable::from_labels(labels);
}

std::string time_id(Time t) { return t == kInfinity ? "inf" : std::to_string(t); }

}  // namespace

std::vector<Rational> box_values(int which) {
    if (which == 1) return {0, 1};
    if (which == 2) return {-1, 1};
    throw DomainError("box_values: box must be 1 or 2");
}

BoxPickingSystem build_box_picking() {
    constexpr std::size_t n = 4;
    constexpr std::size_t horizon = 2;
    const SampleSpace space({"(0,-1)", "(0,1)", "(1,-1)", "(1,1)"});
    const ProbMeasure p({Rational(1, 6), Rational(1, 3), Rational(1, 3), Rational(1, 6)});

    BoxPickingSystem out;
    auto& sys = out.consistent;
    sys.space = space;
    sys.horizon = horizon;

    // control paths c_t(w), t = 0, 1, 2
    std::vector<std::vector<std::vector<int>>> paths;
    for (int c1 : {1, 2}) {
        const auto values = box_values(c1);
        for (int low : {1, 2}) {
            for (int high : {1, 2}) {
                std::vector<std::vector<Rational>> rows(n);
                std::vector<std::vector<int>> path(n);
                std::vector<Rational> payoff(n);
                for (std::size_t w = 0; w < n; ++w) {
                    const Rational& x1 = box(c1, w);
                    const int c2 = x1 == values[0] ? low : high;
                    const Rational& x2 = box(c2, w);
                    rows[w] = {0, x1, x2};
                    path[w] = {0, c1, c2};
                    payoff[w] = x1 + x2;
                }
                DiscreteProcess observed(std::move(rows));
                const std::string id = std::to_string(c1) + "-" + std::to_string(low) + std::to_string(high);
                if (c1 == 1 && low == 2 && high == 1) out.c_star = sys.controls.size();
                sys.controls.push_back(Control{id, process::natural_filtration(observed), p,
                                               RandomVariable(std::move(payoff)), std::move(observed)});
                paths.push_back(std::move(path));
            }
        }
    }

    const auto k = sys.controls.size();
    for (Time t : {Time{0}, Time{1}, Time{2}, kInfinity}) {
        sys.times.push_back(control::deterministic_time(time_id(t), k, n, t));
        std::vector<std::vector<int>> keys(k);
        for (std::size_t c = 0; c < k; ++c) {
            if (t == kInfinity) {
                keys[c] = {static_cast<int>(c)};
                continue;
            }
            for (std::size_t w = 0; w < n; ++w) {
                for (Time u = 0; u <= t; ++u) keys[c].push_back(paths[c][w][u]);
            }
        }
        sys.classes.push_back(classes_by_key(keys));
    }

    out.classical = sys;
    const Filtration f({SigmaField::trivial(n), SigmaField::discrete(n), SigmaField::discrete(n)});
    for (auto& ctl : out.classical.controls) ctl.filtration = f;
    return out;
}

// ------------------------------------------------------------ optimal stopping

std::vector<RandomTime> enumerate_stopping_times(const Filtration& f) {
    const auto n = f.outcome_count();
    const auto horizon = f.horizon();
    std::vector<RandomTime> out;
    std::vector<Time> values(n, kInfinity);

    // at stage t, each atom of F_t still running either stops now or continues
    std::function<void(Time)> stage = [&](Time t) {
        if (t == horizon) {
            auto done = values;
            for (auto& v : done) {
                if (v == kInfinity) v = horizon;
            }
            out.emplace_back(std::move(done));
            return;
        }
        std::vector<std::vector<std::size_t>> running;
        for (const auto& atom : f.stage(t).atoms()) {
            if (values[atom.front()] == kInfinity) running.push_back(atom);
        }
        const std::size_t choices = std::size_t{1} << running.size();
        for (std::size_t mask = 0; mask < choices; ++mask) {
            for (std::size_t i = 0; i < running.size(); ++i) {
                if (mask >> i & 1U) {
                    for (auto w : running[i]) values[w] = t;
                }
            }
            stage(t + 1);
            for (std::size_t i = 0; i < running.size(); ++i) {
                if (mask >> i & 1U) {
                    for (auto w : running[i]) values[w] = kInfinity;
                }
            }
        }
    };
    stage(0);
    return out;
}

OptimalStoppingSystem build_optimal_stopping(const DiscreteProcess& x, const ProbMeasure& p) {
    if (x.outcome_count() != p.size()) throw DimensionError("build_optimal_stopping: measure size mismatch");
    const auto n = x.outcome_count();
    const auto horizon = x.horizon();

    OptimalStoppingSystem out;
    out.x = x;
    out.filtration = process::natural_filtration(x);
    out.measure = p;
    auto& sys = out.system;
    sys.space = SampleSpace::indexed(n);
    sys.horizon = horizon;

    const auto taus = enumerate_stopping_times(out.filtration);
    for (std::size_t i = 0; i < taus.size(); ++i) {
        const auto& tau = taus[i];
        std::vector<SigmaField> stages;
        stages.reserve(horizon + 1);
        for (Time t = 0; t <= horizon; ++t) {
            stages.push_back(process::sigma_at(out.filtration, process::min(tau, RandomTime::constant(n, t))));
        }
        std::vector<Rational> payoff(n);
        std::string id;
        for (std::size_t w = 0; w < n; ++w) {
            payoff[w] = x.at(w, tau[w]);
            if (w > 0) id += ",";
            id += std::to_string(tau[w]);
        }
        if (tau.deterministic_value() == std::optional<Time>(horizon)) out.never_stopped = i;
        sys.controls.push_back(Control{"tau=" + id, Filtration(std::move(stages)), p, RandomVariable(std::move(payoff)),
                                       process::stop_process(x, tau)});
    }

    const auto k = sys.controls.size();
    std::vector<Time> grid;
    for (Time t = 0; t <= horizon; ++t) grid.push_back(t);
    grid.push_back(kInfinity);
    for (Time t : grid) {
        sys.times.push_back(control::deterministic_time(time_id(t), k, n, t));
        std::vector<std::vector<Time>> keys;
        keys.reserve(k);
        for (const auto& tau : taus) keys.push_back(process::min(tau, RandomTime::constant(n, t)).values());
        sys.classes.push_back(classes_by_key(keys));
    }
    return out;
}

std::vector<RandomVariable> snell_envelope(const DiscreteProcess& x, const Filtration& f, const ProbMeasure& p) {
    const auto horizon = x.horizon();
    std::vector<RandomVariable> e(horizon + 1);
    e[horizon] = x.coordinate(horizon);
    for (Time t = horizon; t-- > 0;) {
        const auto next = finite::cond_exp(p, e[t + 1], f.stage(t));
        auto now = x.coordinate(t);
        for (std::size_t w = 0; w < now.size(); ++w) {
            if (next[w] > now[w]) now[w] = next[w];
        }
        e[t] = std::move(now);
    }
    return e;
}

bool snell_crosscheck(const OptimalStoppingSystem& sys) {
    return snell_crosscheck(sys, control::compute_tables(sys.system));
}

bool snell_crosscheck(const OptimalStoppingSystem& sys, const control::SystemTables& tables) {
    const auto envelope = snell_envelope(sys.x, sys.filtration, sys.measure);
    for (Time t = 0; t <= sys.x.horizon(); ++t) {
        const auto s = sys.system.find_time(time_id(t));
        if (!s) return false;
        if (!finite::as_equal(sys.measure, tables.value[*s][sys.never_stopped], envelope[t])) return false;
    }
    return true;
}

}  // namespace bellman::examples
