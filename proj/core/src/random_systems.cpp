#include "bellman/random_systems.hpp"

#include "bellman/control_engine.hpp"
#include "bellman/errors.hpp"

#include <algorithm>
#include <numeric>

namespace bellman::control {

namespace {

std::size_t draw(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

long draw_long(std::mt19937_64& rng, long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

std::string time_id(Time t) { return t == kInfinity ? "inf" : std::to_string(t); }

bool dominated(const ProbMeasure& mu, const RandomVariable& x, const RandomVariable& y) {
    return finite::as_less_equal(mu, x, y);
}

RandomVariable pointwise_max(const RandomVariable& a, const RandomVariable& b) {
    RandomVariable out = a;
    for (std::size_t w = 0; w < out.size(); ++w) {
        if (b[w] > out[w]) out[w] = b[w];
    }
    return out;
}

FiniteControlSystem without_control(const FiniteControlSystem& sys, std::size_t x) {
    FiniteControlSystem out;
    out.space = sys.space;
    out.horizon = sys.horizon;
    for (std::size_t c = 0; c < sys.control_count(); ++c) {
        if (c != x) out.controls.push_back(sys.controls[c]);
    }
    auto reindex = [x](std::size_t c) { return c > x ? c - 1 : c; };
    for (std::size_t s = 0; s < sys.time_count(); ++s) {
        ControlTime time{sys.times[s].id, {}};
        std::vector<std::vector<std::size_t>> lists;
        for (std::size_t c = 0; c < sys.control_count(); ++c) {
            if (c == x) continue;
            time.per_control.push_back(sys.times[s].per_control[c]);
            std::vector<std::size_t> members;
            for (auto d : sys.classes[s].members(c)) {
                if (d != x) members.push_back(reindex(d));
            }
            lists.push_back(std::move(members));
        }
        out.times.push_back(std::move(time));
        out.classes.push_back(ClassTable::from_lists(lists));
    }
    return out;
}

}  // namespace

FiniteControlSystem random_coherent_system(std::mt19937_64& rng, const RandomSystemOptions& options) {
    if (options.max_controls < 2) throw ConfigError("random_coherent_system: max_controls must be at least 2");
    if (options.max_outcomes < 2) throw ConfigError("random_coherent_system: max_outcomes must be at least 2");
    if (options.max_horizon < 1) throw ConfigError("random_coherent_system: max_horizon must be at least 1");

    const auto n = draw(rng, 2, options.max_outcomes);
    const auto horizon = draw(rng, 1, options.max_horizon);
    const auto s = draw(rng, 1, horizon);
    // two decision atoms need a time before s at which they are revealed
    const std::size_t m = (s >= 2 && options.max_controls >= 4 && draw(rng, 0, 1) == 1) ? 2 : 1;

    std::vector<std::size_t> block(n, 0);
    if (m == 2) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        std::shuffle(order.begin(), order.end(), rng);
        const auto cut = draw(rng, 1, n - 1);
        for (std::size_t i = cut; i < n; ++i) block[order[i]] = 1;
    }
    const auto reveal = m == 2 ? draw(rng, 1, s - 1) : s;

    // observed processes after the decision, one per action
    std::vector<std::vector<std::vector<long>>> after(2, std::vector<std::vector<long>>(n, std::vector<long>(horizon + 1)));
    for (auto& proc : after) {
        for (auto& row : proc) {
            for (auto& v : row) v = draw_long(rng, 0, 2);
        }
    }

    std::vector<Rational> q(m);
    for (auto& v : q) v = static_cast<long>(draw(rng, 1, 4));
    const Rational q_total = std::accumulate(q.begin(), q.end(), Rational(0));
    std::vector<std::vector<std::vector<Rational>>> within(m, std::vector<std::vector<Rational>>(2, std::vector<Rational>(n)));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t a = 0; a < 2; ++a) {
            if (a == 1 && !options.control_dependent_measure) {
                within[j][1] = within[j][0];
                continue;
            }
            Rational total = 0;
            while (total == 0) {
                for (std::size_t w = 0; w < n; ++w) {
                    within[j][a][w] = block[w] == j ? Rational(static_cast<long>(draw(rng, 0, 3))) : Rational(0);
                    total += within[j][a][w];
                }
            }
            for (auto& v : within[j][a]) v /= total;
        }
    }

    std::vector<std::vector<long>> reward(2, std::vector<long>(n));
    for (auto& r : reward) {
        for (auto& v : r) v = draw_long(rng, -3, 3);
    }

    FiniteControlSystem sys;
    sys.space = finite::SampleSpace::indexed(n);
    sys.horizon = horizon;
    const std::size_t k = std::size_t{1} << m;
    for (std::size_t map = 0; map < k; ++map) {
        auto action = [&](std::size_t w) { return (map >> block[w]) & 1U; };
        std::vector<std::vector<Rational>> rows(n, std::vector<Rational>(horizon + 1));
        std::vector<Rational> weights(n);
        std::vector<Rational> payoff(n);
        for (std::size_t w = 0; w < n; ++w) {
            const auto a = action(w);
            for (std::size_t t = 0; t <= horizon; ++t) {
                if (t < s) {
                    rows[w][t] = t >= reveal ? static_cast<long>(block[w]) : 0L;
                } else {
                    rows[w][t] = static_cast<long>(10 * (a + 1)) + after[a][w][t];
                }
            }
            weights[w] = q[block[w]] / q_total * within[block[w]][a][w];
            payoff[w] = reward[a][w];
        }
        std::string id = "a=";
        for (std::size_t j = 0; j < m; ++j) id += std::to_string((map >> j) & 1U);
        DiscreteProcess observed(std::move(rows));
        sys.controls.push_back(Control{id, process::natural_filtration(observed), ProbMeasure(std::move(weights)),
                                       RandomVariable(std::move(payoff)), std::move(observed)});
    }

    std::vector<Time> grid;
    for (Time t = 0; t <= horizon; ++t) grid.push_back(t);
    grid.push_back(kInfinity);
    for (Time t : grid) {
        sys.times.push_back(deterministic_time(time_id(t), k, n, t));
        std::vector<std::size_t> labels(k, 0);
        if (t >= s) std::iota(labels.begin(), labels.end(), 0);
        sys.classes.push_back(ClassTable::from_labels(labels));
    }
    return sys;
}

std::string to_string(MutationKind kind) {
    return kind == MutationKind::class_enlarged ? "class-enlarged" : "glued-control-deleted";
}

std::optional<Mutation> mutate(std::mt19937_64& rng, const FiniteControlSystem& sys) {
    const auto tables = compute_tables(sys);
    const auto k = sys.control_count();

    struct Enlarge {
        std::size_t s, c, d;
    };
    struct Delete {
        std::size_t s, x, d, e;
    };
    std::vector<Enlarge> enlarge;
    std::vector<Delete> remove;

    for (std::size_t s = 0; s < sys.time_count(); ++s) {
        if (sys.times[s].id == "inf") continue;
        const auto& table = sys.classes[s];
        for (std::size_t c = 0; c < k; ++c) {
            const auto& members = table.members(c);
            if (members.size() == 1) {
                for (std::size_t d = c + 1; d < k; ++d) {
                    if (table.members(d).size() != 1) continue;
                    const auto& pc = sys.controls[c].measure;
                    if (!dominated(pc, tables.payoff[s][c], tables.payoff[s][d]) &&
                        !dominated(pc, tables.payoff[s][d], tables.payoff[s][c])) {
                        enlarge.push_back({s, c, d});
                    }
                }
                continue;
            }
            if (members.front() != c) continue;
            const auto& mu = sys.controls[c].measure;
            for (auto d : members) {
                for (auto e : members) {
                    if (e <= d) continue;
                    const auto top = pointwise_max(tables.payoff[s][d], tables.payoff[s][e]);
                    std::vector<std::size_t> bounds;
                    for (auto y : members) {
                        if (dominated(mu, top, tables.payoff[s][y])) bounds.push_back(y);
                    }
                    if (bounds.size() == 1 && bounds[0] != d && bounds[0] != e &&
                        finite::as_equal(mu, top, tables.payoff[s][bounds[0]])) {
                        remove.push_back({s, bounds[0], d, e});
                    }
                }
            }
        }
    }
    if (enlarge.empty() && remove.empty()) return std::nullopt;

    const bool pick_enlarge = remove.empty() || (!enlarge.empty() && draw(rng, 0, 1) == 0);
    Mutation out;
    if (pick_enlarge) {
        const auto& e = enlarge[draw(rng, 0, enlarge.size() - 1)];
        out.kind = MutationKind::class_enlarged;
        out.system = sys;
        std::vector<std::vector<std::size_t>> lists(k);
        for (std::size_t c = 0; c < k; ++c) lists[c] = sys.classes[e.s].members(c);
        lists[e.c] = lists[e.d] = {e.c, e.d};
        out.system.classes[e.s] = ClassTable::from_lists(lists);
        out.description = "D(" + sys.controls[e.c].id + "," + sys.times[e.s].id + ") enlarged by " + sys.controls[e.d].id;
    } else {
        const auto& r = remove[draw(rng, 0, remove.size() - 1)];
        out.kind = MutationKind::glued_control_deleted;
        out.system = without_control(sys, r.x);
        out.description = "removed " + sys.controls[r.x].id + ", the only upper bound of " + sys.controls[r.d].id +
                          " and " + sys.controls[r.e].id + " at " + sys.times[r.s].id;
    }
    return out;
}

SigmaField random_coarsening(std::mt19937_64& rng, const SigmaField& g) {
    const auto atoms = g.atom_count();
    const auto groups = draw(rng, 1, atoms);
    std::vector<std::size_t> group_of(atoms);
    for (auto& v : group_of) v = draw(rng, 0, groups - 1);
    std::vector<std::size_t> labels(g.outcome_count());
    for (std::size_t w = 0; w < labels.size(); ++w) labels[w] = group_of[g.atom_of(w)];
    return SigmaField::from_labels(labels);
}

}  // namespace bellman::control
