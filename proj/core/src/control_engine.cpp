#include "bellman/control_engine.hpp"

#include "bellman/errors.hpp"

#include <algorithm>
#include <map>

namespace bellman::control {

namespace {

using finite::as_equal;
using finite::as_less_equal;
using finite::cond_exp;

RandomVariable pointwise_max(const std::vector<const RandomVariable*>& family) {
    RandomVariable out = *family.front();
    for (std::size_t i = 1; i < family.size(); ++i) {
        for (std::size_t w = 0; w < out.size(); ++w) {
            if ((*family[i])[w] > out[w]) out[w] = (*family[i])[w];
        }
    }
    return out;
}

/// First charged outcome where x > y.
std::optional<std::size_t> first_excess(const ProbMeasure& mu, const RandomVariable& x, const RandomVariable& y) {
    for (std::size_t w = 0; w < mu.size(); ++w) {
        if (!mu.is_null(w) && x[w] > y[w]) return w;
    }
    return std::nullopt;
}

std::optional<std::size_t> first_mismatch(const ProbMeasure& mu, const RandomVariable& x, const RandomVariable& y) {
    for (std::size_t w = 0; w < mu.size(); ++w) {
        if (!mu.is_null(w) && x[w] != y[w]) return w;
    }
    return std::nullopt;
}

std::string event_to_string(const Event& e) {
    std::string out = "{";
    bool first = true;
    for (std::size_t w = 0; w < e.size(); ++w) {
        if (!e[w]) continue;
        if (!first) out += ",";
        out += std::to_string(w);
        first = false;
    }
    return out + "}";
}

Rational capped(const std::optional<Rational>& cap, const Rational& v) { return cap && *cap < v ? *cap : v; }

/// Searches for d, d' and an event G with no d'' dominating the capped glued variable.
std::optional<Witness> gluing_failure(const std::vector<std::size_t>& members,
                                      const std::vector<const RandomVariable*>& family, const ProbMeasure& mu,
                                      const std::vector<Event>& events, const Rational& eps,
                                      const std::optional<Rational>& cap, const FiniteControlSystem& sys) {
    const auto n = mu.size();
    std::vector<Rational> target(n);
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = 0; j < members.size(); ++j) {
            if (i == j) continue;
            for (const auto& g : events) {
                for (std::size_t w = 0; w < n; ++w) {
                    target[w] = capped(cap, g[w] ? (*family[i])[w] : (*family[j])[w]) - eps;
                }
                bool found = false;
                for (std::size_t h = 0; h < members.size() && !found; ++h) {
                    bool dominates = true;
                    for (std::size_t w = 0; w < n && dominates; ++w) {
                        if (!mu.is_null(w)) dominates = (*family[h])[w] >= target[w];
                    }
                    found = dominates;
                }
                if (!found) {
                    return Witness{.control = sys.controls[members[i]].id,
                                   .other_control = sys.controls[members[j]].id,
                                   .detail = "no control dominates the glued payoff on G = " + event_to_string(g)};
                }
            }
        }
    }
    return std::nullopt;
}

}  // namespace

SystemTables compute_tables(const FiniteControlSystem& sys) {
    const auto k = sys.control_count();
    const auto nt = sys.time_count();
    SystemTables tables;
    tables.field.resize(nt);
    tables.payoff.resize(nt);
    tables.value.resize(nt);
    for (std::size_t s = 0; s < nt; ++s) {
        tables.field[s].reserve(k);
        tables.payoff[s].reserve(k);
        for (std::size_t c = 0; c < k; ++c) {
            tables.field[s].push_back(stopped_field(sys, c, s));
            tables.payoff[s].push_back(cond_exp(sys.controls[c].measure, sys.controls[c].payoff, tables.field[s][c]));
        }
        // the pointwise maximum does not depend on the measure, so one value per class
        const auto& table = sys.classes.at(s);
        std::vector<std::optional<RandomVariable>> per_list(table.list_count());
        tables.value[s].reserve(k);
        for (std::size_t c = 0; c < k; ++c) {
            auto& cached = per_list[table.list_id(c)];
            if (!cached) {
                const auto& members = table.members(c);
                if (members.empty()) throw PreconditionError("empty class D(c,S)");
                std::vector<const RandomVariable*> family;
                family.reserve(members.size());
                for (auto d : members) family.push_back(&tables.payoff[s][d]);
                cached = pointwise_max(family);
            }
            tables.value[s].push_back(*cached);
        }
    }
    return tables;
}

RandomVariable conditional_payoff(const FiniteControlSystem& sys, std::size_t c, std::size_t s) {
    return cond_exp(sys.controls.at(c).measure, sys.controls[c].payoff, stopped_field(sys, c, s));
}

RandomVariable bellman_value(const FiniteControlSystem& sys, std::size_t c, std::size_t s) {
    const auto& members = sys.classes.at(s).members(c);
    if (members.empty()) throw PreconditionError("empty class D(c,S)");
    std::vector<RandomVariable> family;
    family.reserve(members.size());
    for (auto d : members) family.push_back(conditional_payoff(sys, d, s));
    return finite::ess_sup(sys.controls[c].measure, family);
}

Solution solve(const FiniteControlSystem& sys) {
    Solution out;
    for (std::size_t c = 0; c < sys.control_count(); ++c) {
        const Rational e = sys.controls[c].measure.expectation(sys.controls[c].payoff);
        if (!out.value || e > *out.value) {
            out.value = e;
            out.optimal = {c};
        } else if (e == *out.value) {
            out.optimal.push_back(c);
        }
    }
    std::sort(out.optimal.begin(), out.optimal.end(),
              [&](std::size_t a, std::size_t b) { return sys.controls[a].id < sys.controls[b].id; });
    return out;
}

// -------------------------------------------------------------------- lattice

LatticeVerdict lattice_check(const FiniteControlSystem& sys, const SystemTables& tables, std::size_t c, std::size_t s,
                             const Rational& eps, const std::optional<Rational>& cap) {
    if (eps < 0) throw PreconditionError("lattice_check: eps must be nonnegative");
    if (cap && *cap <= 0) throw PreconditionError("lattice_check: M must be positive");
    LatticeVerdict v;
    v.control = sys.controls.at(c).id;
    v.time = sys.times.at(s).id;
    v.eps = eps;
    v.cap = cap;

    const auto& members = sys.classes[s].members(c);
    const auto& pc = sys.controls[c].measure;
    const auto events = finite::enumerate_events(tables.field[s][c]);

    std::vector<const RandomVariable*> raw, conditioned;
    for (auto d : members) {
        raw.push_back(&sys.controls[d].payoff);
        conditioned.push_back(&tables.payoff[s][d]);
    }

    bool same_measure = true;
    for (auto d : members) {
        if (!(sys.controls[d].measure == pc)) {
            same_measure = false;
            v.witnesses.push_back(Witness{.control = v.control, .other_control = sys.controls[d].id,
                                          .time = v.time, .detail = "C1: P^d differs from P^c"});
            break;
        }
    }
    v.c1 = same_measure;
    if (v.c1) {
        if (auto w = gluing_failure(members, raw, pc, events, eps, cap, sys)) {
            v.c1 = false;
            w->time = v.time;
            w->detail = "C1: " + w->detail;
            v.witnesses.push_back(*w);
        }
    }
    v.c2 = true;
    if (auto w = gluing_failure(members, conditioned, pc, events, eps, cap, sys)) {
        v.c2 = false;
        w->time = v.time;
        w->detail = "C2: " + w->detail;
        v.witnesses.push_back(*w);
    }

    std::vector<RandomVariable> family;
    for (auto p : conditioned) family.push_back(*p);
    v.c3 = finite::has_upwards_lattice_property(pc, family, eps, cap);
    if (!v.c3) v.witnesses.push_back(Witness{.control = v.control, .time = v.time, .detail = "C3: family not upwards directed"});

    if (v.c2 && !v.c3) v.implication_ok = false;
    if (!cap && v.c1 && !v.c2) v.implication_ok = false;
    return v;
}

ConsistencyVerdict consistency_theorem_check(const FiniteControlSystem& sys, const SystemTables& tables,
                                             std::size_t c, std::size_t t, const SigmaField& a) {
    if (!a.is_coarser_than(tables.field.at(t).at(c))) {
        throw PreconditionError("consistency_theorem_check: A is not a sub-field of G^c_{T^c}");
    }
    if (!lattice_check(sys, tables, c, t, 0, std::nullopt).c3) {
        throw PreconditionError("consistency_theorem_check: lattice property fails at (c,T)");
    }
    ConsistencyVerdict v;
    const auto& pc = sys.controls[c].measure;
    const auto lhs = cond_exp(pc, tables.value[t][c], a);
    std::vector<RandomVariable> family;
    std::optional<Rational> best;
    for (auto d : sys.classes[t].members(c)) {
        const auto& ctl = sys.controls[d];
        family.push_back(cond_exp(ctl.measure, ctl.payoff, a));
        const Rational e = ctl.measure.expectation(ctl.payoff);
        if (!best || e > *best) best = e;
    }
    const auto rhs = finite::ess_sup(pc, family);
    v.conditional = as_equal(pc, lhs, rhs);
    if (!v.conditional) {
        const auto w = *first_mismatch(pc, lhs, rhs);
        v.witnesses.push_back(Witness{.control = sys.controls[c].id, .time = sys.times[t].id, .outcome = w,
                                      .lhs = to_string(lhs[w]), .rhs = to_string(rhs[w]),
                                      .detail = "E[V(c,T)|A] differs from ess sup E[J(d)|A]"});
    }
    const Rational ev = pc.expectation(tables.value[t][c]);
    v.expectation = ev == *best;
    if (!v.expectation) {
        v.witnesses.push_back(Witness{.control = sys.controls[c].id, .time = sys.times[t].id, .lhs = to_string(ev),
                                      .rhs = to_string(*best), .detail = "E V(c,T) differs from sup E J(d)"});
    }
    return v;
}

// -------------------------------------------------------------------- Bellman

void PrincipleVerdict::fail(Witness w) {
    passed = false;
    ++violations;
    if (witnesses.size() < RuleVerdict::kWitnessCap) witnesses.push_back(std::move(w));
}

std::vector<std::size_t> default_chain(const FiniteControlSystem& sys) {
    std::vector<std::pair<Time, std::size_t>> deterministic;
    for (std::size_t s = 0; s < sys.time_count(); ++s) {
        std::optional<Time> value;
        bool ok = sys.control_count() > 0;
        for (std::size_t c = 0; c < sys.control_count() && ok; ++c) {
            const auto v = sys.times[s].per_control[c].deterministic_value();
            ok = v && (!value || *value == *v);
            if (ok) value = v;
        }
        if (ok) deterministic.emplace_back(*value, s);
    }
    std::sort(deterministic.begin(), deterministic.end());
    std::vector<std::size_t> chain;
    for (std::size_t i = 0; i < deterministic.size(); ++i) {
        if (i > 0 && deterministic[i].first == deterministic[i - 1].first) continue;
        chain.push_back(deterministic[i].second);
    }
    return chain;
}

BellmanVerification verify_bellman(const FiniteControlSystem& sys, const SystemTables& tables,
                                   const std::optional<std::vector<std::size_t>>& chain) {
    const auto zero = sys.zero_time();
    const auto inf = sys.infinity_time();
    if (!zero || !inf) throw PreconditionError("verify_bellman: the times 0 and infinity must be present");

    BellmanVerification out;
    out.solution = solve(sys);
    out.notes.push_back("optimizing nets reduce to maxima over the finite control set");
    out.notes.push_back("uniform integrability holds automatically on a finite space");
    const auto k = sys.control_count();
    const auto nt = sys.time_count();
    auto cid = [&](std::size_t c) { return sys.controls[c].id; };
    auto tid = [&](std::size_t s) { return sys.times[s].id; };

    // ordered pairs (S,T) per control
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> ordered(k);
    ClasswiseOrder order(sys);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t s = 0; s < nt; ++s) {
            for (std::size_t t = 0; t < nt; ++t) {
                if (s != t && order.le(c, s, t)) ordered[c].emplace_back(s, t);
            }
        }
    }

    // B1
    for (std::size_t c = 0; c < k; ++c) {
        const auto& pc = sys.controls[c].measure;
        for (std::size_t s = 0; s < nt; ++s) {
            ++out.b1.checked;
            if (!finite::complete(tables.field[s][c], pc).measures(tables.value[s][c])) {
                out.b1.fail(Witness{.control = cid(c), .time = tid(s), .detail = "V(c,S) not G^c_{S^c}-measurable"});
            }
            for (auto d : sys.classes[s].members(c)) {
                // a shared member list yields the same maximum
                if (d == c || sys.classes[s].list_id(d) == sys.classes[s].list_id(c)) continue;
                auto w = first_mismatch(pc, tables.value[s][c], tables.value[s][d]);
                if (!w) w = first_mismatch(sys.controls[d].measure, tables.value[s][c], tables.value[s][d]);
                if (w) {
                    out.b1.fail(Witness{.control = cid(c), .other_control = cid(d), .time = tid(s), .outcome = *w,
                                        .lhs = to_string(tables.value[s][c][*w]),
                                        .rhs = to_string(tables.value[s][d][*w]),
                                        .detail = "V(c,S) != V(d,S) for c ~_S d"});
                }
            }
        }
        for (auto [s, t] : ordered[c]) {
            ++out.b1.checked;
            const auto lhs = cond_exp(pc, tables.value[t][c], tables.field[s][c]);
            if (auto w = first_excess(pc, lhs, tables.value[s][c])) {
                out.b1.fail(Witness{.control = cid(c), .time = tid(s), .other_time = tid(t), .outcome = *w,
                                    .lhs = to_string(lhs[*w]), .rhs = to_string(tables.value[s][c][*w]),
                                    .detail = "E[V(c,T) | G^c_{S^c}] > V(c,S)"});
            }
        }
    }

    // B2, B3
    for (auto c : out.solution.optimal) {
        const auto& pc = sys.controls[c].measure;
        for (std::size_t t = 0; t < nt; ++t) {
            ++out.b2.checked;
            const Rational e = pc.expectation(tables.value[t][c]);
            if (e != *out.solution.value) {
                out.b2.fail(Witness{.control = cid(c), .time = tid(t), .lhs = to_string(e),
                                    .rhs = to_string(*out.solution.value), .detail = "E V(c*,T) != v"});
            }
        }
        for (auto [s, t] : ordered[c]) {
            ++out.b3.checked;
            const auto lhs = cond_exp(pc, tables.value[t][c], tables.field[s][c]);
            if (auto w = first_mismatch(pc, lhs, tables.value[s][c])) {
                out.b3.fail(Witness{.control = cid(c), .time = tid(s), .other_time = tid(t), .outcome = *w,
                                    .lhs = to_string(lhs[*w]), .rhs = to_string(tables.value[s][c][*w]),
                                    .detail = "E[V(c*,T) | G_S] != V(c*,S)"});
            }
        }
    }

    // B4
    auto conditionally_optimal = [&](std::size_t c, std::size_t s) {
        return as_equal(sys.controls[c].measure, tables.value[s][c], tables.payoff[s][c]);
    };
    for (auto c : out.solution.optimal) {
        ++out.b4.checked;
        if (!conditionally_optimal(c, *zero)) {
            out.b4.fail(Witness{.control = cid(c), .time = tid(*zero), .detail = "optimal control not conditionally optimal at 0"});
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        for (auto [s, t] : ordered[c]) {
            if (!conditionally_optimal(c, s)) continue;
            ++out.b4.checked;
            if (!conditionally_optimal(c, t)) {
                out.b4.fail(Witness{.control = cid(c), .time = tid(s), .other_time = tid(t),
                                    .detail = "conditionally optimal at S but not at T"});
            }
        }
    }

    // B5
    const auto used = chain ? *chain : default_chain(sys);
    for (auto s : used) out.chain.push_back(tid(s));
    if (used.empty() || !sys.times[used.front()].per_control.empty()) {
        bool starts_at_zero = !used.empty();
        for (std::size_t c = 0; c < k && starts_at_zero; ++c) {
            starts_at_zero = sys.times[used.front()].per_control[c].deterministic_value() == std::optional<Time>(0);
        }
        if (!starts_at_zero && k > 0) throw PreconditionError("verify_bellman: the B5 chain must start at 0");
    }
    for (std::size_t c = 0; c < k && !used.empty(); ++c) {
        const auto& pc = sys.controls[c].measure;
        const Rational e0 = pc.expectation(tables.value[used.front()][c]);
        bool constant = true;
        for (auto s : used) constant = constant && pc.expectation(tables.value[s][c]) == e0;
        const bool converges = as_equal(pc, tables.value[used.back()][c], tables.value[*inf][c]);
        if (!constant || !converges) continue;
        ++out.b5.checked;
        const bool optimal =
            std::find(out.solution.optimal.begin(), out.solution.optimal.end(), c) != out.solution.optimal.end();
        if (!optimal) {
            out.b5.fail(Witness{.control = cid(c), .lhs = to_string(pc.expectation(sys.controls[c].payoff)),
                                .rhs = to_string(*out.solution.value),
                                .detail = "hypotheses hold along the chain but the control is not optimal"});
        }
    }
    return out;
}

// ------------------------------------------------------------------- envelope

std::string to_string(EnvelopeOutcome outcome) {
    switch (outcome) {
        case EnvelopeOutcome::minimal: return "minimal";
        case EnvelopeOutcome::not_supermartingale: return "not-supermartingale";
        case EnvelopeOutcome::terminal_fails: return "terminal-condition-fails";
        case EnvelopeOutcome::below_bellman: return "below-bellman";
    }
    return "unknown";
}

EnvelopeVerdict envelope_minimality(const FiniteControlSystem& sys, const SystemTables& tables,
                                    const std::vector<std::vector<RandomVariable>>& w) {
    const auto k = sys.control_count();
    const auto nt = sys.time_count();
    if (w.size() != nt) throw DimensionError("envelope_minimality: candidate has wrong number of times");
    for (const auto& row : w) {
        if (row.size() != k) throw DimensionError("envelope_minimality: candidate has wrong number of controls");
    }
    const auto inf = sys.infinity_time();
    if (!inf) throw PreconditionError("envelope_minimality: the time infinity must be present");

    EnvelopeVerdict v;
    ClasswiseOrder order(sys);
    auto reject = [&](EnvelopeOutcome o, Witness wit) {
        v.outcome = o;
        v.witnesses.push_back(std::move(wit));
        return v;
    };

    for (std::size_t c = 0; c < k; ++c) {
        const auto& pc = sys.controls[c].measure;
        for (std::size_t s = 0; s < nt; ++s) {
            if (!finite::complete(tables.field[s][c], pc).measures(w[s][c])) {
                return reject(EnvelopeOutcome::not_supermartingale,
                              Witness{.control = sys.controls[c].id, .time = sys.times[s].id,
                                      .detail = "W(c,S) not G^c_{S^c}-measurable"});
            }
            for (auto d : sys.classes[s].members(c)) {
                if (!as_equal(pc, w[s][c], w[s][d]) || !as_equal(sys.controls[d].measure, w[s][c], w[s][d])) {
                    return reject(EnvelopeOutcome::not_supermartingale,
                                  Witness{.control = sys.controls[c].id, .other_control = sys.controls[d].id,
                                          .time = sys.times[s].id, .detail = "W(c,S) != W(d,S) for c ~_S d"});
                }
            }
            for (std::size_t t = 0; t < nt; ++t) {
                if (s == t || !order.le(c, s, t)) continue;
                const auto lhs = cond_exp(pc, w[t][c], tables.field[s][c]);
                if (auto o = first_excess(pc, lhs, w[s][c])) {
                    return reject(EnvelopeOutcome::not_supermartingale,
                                  Witness{.control = sys.controls[c].id, .time = sys.times[s].id,
                                          .other_time = sys.times[t].id, .outcome = *o, .lhs = to_string(lhs[*o]),
                                          .rhs = to_string(w[s][c][*o]), .detail = "E[W(c,T) | G_S] > W(c,S)"});
                }
            }
        }
        const auto terminal = cond_exp(pc, sys.controls[c].payoff, tables.field[*inf][c]);
        if (auto o = first_excess(pc, terminal, w[*inf][c])) {
            return reject(EnvelopeOutcome::terminal_fails,
                          Witness{.control = sys.controls[c].id, .time = sys.times[*inf].id, .outcome = *o,
                                  .lhs = to_string(w[*inf][c][*o]), .rhs = to_string(terminal[*o]),
                                  .detail = "W(c,inf) < E[J(c) | G^c_inf]"});
        }
    }
    for (std::size_t c = 0; c < k; ++c) {
        const auto& pc = sys.controls[c].measure;
        for (std::size_t s = 0; s < nt; ++s) {
            if (auto o = first_excess(pc, tables.value[s][c], w[s][c])) {
                return reject(EnvelopeOutcome::below_bellman,
                              Witness{.control = sys.controls[c].id, .time = sys.times[s].id, .outcome = *o,
                                      .lhs = to_string(w[s][c][*o]), .rhs = to_string(tables.value[s][c][*o]),
                                      .detail = "W(c,S) < V(c,S)"});
            }
            if (first_mismatch(pc, tables.value[s][c], w[s][c])) v.strict = true;
        }
    }
    return v;
}

// ------------------------------------------------------------- payoff system

std::vector<PayoffCase> default_payoff_cases(const FiniteControlSystem& sys) {
    std::vector<PayoffCase> cases;
    const Event omega(sys.space.size(), true);
    for (std::size_t s = 0; s < sys.time_count(); ++s) {
        for (std::size_t c = 0; c < sys.control_count(); ++c) {
            for (auto d : sys.classes[s].members(c)) {
                if (d > c) cases.push_back(PayoffCase{c, d, s, omega});
            }
        }
    }
    return cases;
}

PayoffSystemVerdict payoff_system_check(const FiniteControlSystem& sys, const SystemTables& tables,
                                        const std::vector<PayoffCase>& cases) {
    PayoffSystemVerdict v;
    const auto k = sys.control_count();
    const auto nt = sys.time_count();
    const auto n = sys.space.size();

    for (std::size_t c = 0; c < k; ++c) {
        const auto& pc = sys.controls[c].measure;
        for (std::size_t s = 0; s < nt; ++s) {
            if (!tables.field[s][c].measures(tables.payoff[s][c])) {
                v.measurable = false;
                v.witnesses.push_back(Witness{.control = sys.controls[c].id, .time = sys.times[s].id,
                                              .detail = "J(c,S) not G^c_{S^c}-measurable"});
            }
            for (std::size_t t = s + 1; t < nt; ++t) {
                const auto& sc = sys.times[s].per_control[c];
                const auto& tc = sys.times[t].per_control[c];
                for (std::size_t w = 0; w < n; ++w) {
                    if (pc.is_null(w) || sc[w] != tc[w]) continue;
                    if (tables.payoff[s][c][w] != tables.payoff[t][c][w]) {
                        v.agrees_on_equal_times = false;
                        v.witnesses.push_back(Witness{.control = sys.controls[c].id, .time = sys.times[s].id,
                                                      .other_time = sys.times[t].id, .outcome = w,
                                                      .lhs = to_string(tables.payoff[s][c][w]),
                                                      .rhs = to_string(tables.payoff[t][c][w]),
                                                      .detail = "J(c,S) != J(c,T) on {S^c = T^c}"});
                        break;
                    }
                }
            }
        }
    }

    const auto horizon = sys.horizon;
    for (const auto& pcase : cases) {
        ++v.cases;
        const auto c = pcase.c;
        const auto d = pcase.d;
        const auto s = pcase.s;
        const auto& a = pcase.a;
        const auto& pc = sys.controls.at(c).measure;
        const auto& pd = sys.controls.at(d).measure;
        if (!sys.classes.at(s).contains(c, d) || !tables.field[s][c].contains(a)) continue;

        bool reaching = false;
        for (std::size_t t = 0; t < nt && !reaching; ++t) {
            if (!sys.classes[t].contains(c, d) || !tables.field[t][c].contains(a)) continue;
            bool ok = true;
            for (std::size_t w = 0; w < n && ok; ++w) {
                if (!a[w]) continue;
                if (!pc.is_null(w) && sys.times[t].per_control[c][w] < horizon) ok = false;
                if (!pd.is_null(w) && sys.times[t].per_control[d][w] < horizon) ok = false;
            }
            reaching = ok;
        }
        if (!reaching) continue;

        const auto tc = cond_exp(pc, sys.controls[c].payoff, sys.controls[c].filtration.terminal());
        const auto td = cond_exp(pd, sys.controls[d].payoff, sys.controls[d].filtration.terminal());
        bool terminal_agree = true;
        for (std::size_t w = 0; w < n && terminal_agree; ++w) {
            if (a[w] && (!pc.is_null(w) || !pd.is_null(w))) terminal_agree = tc[w] == td[w];
        }
        if (!terminal_agree) continue;

        ++v.hypotheses_met;
        for (std::size_t w = 0; w < n; ++w) {
            if (!a[w] || (pc.is_null(w) && pd.is_null(w))) continue;
            if (tables.payoff[s][c][w] != tables.payoff[s][d][w]) {
                v.conclusion_holds = false;
                v.witnesses.push_back(Witness{.control = sys.controls[c].id, .other_control = sys.controls[d].id,
                                              .time = sys.times[s].id, .outcome = w,
                                              .lhs = to_string(tables.payoff[s][c][w]),
                                              .rhs = to_string(tables.payoff[s][d][w]),
                                              .detail = "J(c,S) != J(d,S) on A"});
                break;
            }
        }
    }
    return v;
}

}  // namespace bellman::control
