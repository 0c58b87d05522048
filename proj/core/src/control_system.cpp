#include "bellman/control_system.hpp"

#include "bellman/errors.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace bellman::control {

namespace {

std::string time_label(const FiniteControlSystem& sys, std::size_t s) { return sys.times[s].id; }

bool all_equal_to(const ProbMeasure& mu, const RandomTime& s, Time value) {
    for (std::size_t w = 0; w < s.size(); ++w) {
        if (!mu.is_null(w) && s[w] != value) return false;
    }
    return true;
}

std::optional<std::size_t> first_difference(const ProbMeasure& mu, const RandomTime& a, const RandomTime& b) {
    for (std::size_t w = 0; w < a.size(); ++w) {
        if (!mu.is_null(w) && a[w] != b[w]) return w;
    }
    return std::nullopt;
}

std::string members_to_string(const FiniteControlSystem& sys, const std::vector<std::size_t>& members) {
    std::string out = "{";
    for (std::size_t i = 0; i < members.size(); ++i) {
        if (i) out += ",";
        out += sys.controls[members[i]].id;
    }
    return out + "}";
}

bool fields_agree(const SigmaField& a, const SigmaField& b, const ProbMeasure& p, const ProbMeasure& q) {
    if (a == b) return true;
    return finite::as_equal_fields(p, a, b) && finite::as_equal_fields(q, a, b);
}

}  // namespace

// ----------------------------------------------------------------- ClassTable

ClassTable ClassTable::from_lists(const std::vector<std::vector<std::size_t>>& per_control) {
    ClassTable table;
    std::map<std::vector<std::size_t>, std::size_t> ids;
    table.list_of_.reserve(per_control.size());
    for (auto list : per_control) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
        auto [it, inserted] = ids.try_emplace(list, table.lists_.size());
        if (inserted) table.lists_.push_back(list);
        table.list_of_.push_back(it->second);
    }
    return table;
}

ClassTable ClassTable::from_labels(const std::vector<std::size_t>& labels) {
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t c = 0; c < labels.size(); ++c) groups[labels[c]].push_back(c);
    ClassTable table;
    std::map<std::size_t, std::size_t> ids;
    for (auto& [label, members] : groups) {
        ids[label] = table.lists_.size();
        table.lists_.push_back(members);
    }
    table.list_of_.reserve(labels.size());
    for (auto label : labels) table.list_of_.push_back(ids[label]);
    return table;
}

bool ClassTable::contains(std::size_t c, std::size_t d) const {
    const auto& m = members(c);
    return std::binary_search(m.begin(), m.end(), d);
}

// -------------------------------------------------------- FiniteControlSystem

std::optional<std::size_t> FiniteControlSystem::find_control(const std::string& id) const {
    for (std::size_t c = 0; c < controls.size(); ++c) {
        if (controls[c].id == id) return c;
    }
    return std::nullopt;
}

std::optional<std::size_t> FiniteControlSystem::find_time(const std::string& id) const {
    for (std::size_t s = 0; s < times.size(); ++s) {
        if (times[s].id == id) return s;
    }
    return std::nullopt;
}

namespace {

std::optional<std::size_t> constant_time(const FiniteControlSystem& sys, Time value) {
    for (std::size_t s = 0; s < sys.times.size(); ++s) {
        bool all = sys.times[s].per_control.size() == sys.controls.size();
        for (std::size_t c = 0; all && c < sys.controls.size(); ++c) {
            all = sys.times[s].per_control[c].deterministic_value() == std::optional<Time>(value);
        }
        if (all) return s;
    }
    return std::nullopt;
}

std::string unique_time_id(const FiniteControlSystem& sys, std::string id) {
    while (sys.find_time(id)) id += "'";
    return id;
}

}  // namespace

std::optional<std::size_t> FiniteControlSystem::zero_time() const { return constant_time(*this, 0); }
std::optional<std::size_t> FiniteControlSystem::infinity_time() const { return constant_time(*this, kInfinity); }

ControlTime deterministic_time(std::string id, std::size_t controls, std::size_t outcomes, Time t) {
    return ControlTime{std::move(id), std::vector<RandomTime>(controls, RandomTime::constant(outcomes, t))};
}

FiniteControlSystem with_extremal_times(FiniteControlSystem sys) {
    const auto n = sys.space.size();
    const auto k = sys.controls.size();
    if (!sys.zero_time()) {
        sys.times.push_back(deterministic_time(unique_time_id(sys, "0"), k, n, 0));
        sys.classes.push_back(ClassTable::from_labels(std::vector<std::size_t>(k, 0)));
    }
    if (!sys.infinity_time()) {
        sys.times.push_back(deterministic_time(unique_time_id(sys, "inf"), k, n, kInfinity));
        std::vector<std::size_t> labels(k);
        for (std::size_t c = 0; c < k; ++c) labels[c] = c;
        sys.classes.push_back(ClassTable::from_labels(labels));
    }
    return sys;
}

ClassTable derive_prefix_classes(const FiniteControlSystem& sys, std::size_t time) {
    const auto k = sys.controls.size();
    std::vector<DiscreteProcess> stopped;
    stopped.reserve(k);
    for (std::size_t c = 0; c < k; ++c) {
        if (!sys.controls[c].observed) {
            throw PreconditionError("derive_prefix_classes: control " + sys.controls[c].id + " has no observed process");
        }
    }
    std::vector<std::vector<std::size_t>> lists(k);
    for (std::size_t c = 0; c < k; ++c) {
        const auto& sc = sys.times.at(time).per_control.at(c);
        if (sc.deterministic_value() == std::optional<Time>(kInfinity)) {
            lists[c] = {c};
            continue;
        }
        const auto xc = process::stop_process(*sys.controls[c].observed, sc);
        for (std::size_t d = 0; d < k; ++d) {
            const auto xd = process::stop_process(*sys.controls[d].observed, sc);
            bool agree = true;
            for (std::size_t w = 0; w < sys.space.size() && agree; ++w) {
                if (sys.controls[c].measure.is_null(w) && sys.controls[d].measure.is_null(w)) continue;
                agree = xc.row(w) == xd.row(w);
            }
            if (agree) lists[c].push_back(d);
        }
    }
    return ClassTable::from_lists(lists);
}

RandomTime stopping_version(const FiniteControlSystem& sys, std::size_t c, std::size_t s) {
    const auto& ctl = sys.controls.at(c);
    const auto& sc = sys.times.at(s).per_control.at(c);
    if (process::is_stopping_time(sc, ctl.filtration)) return sc;
    if (auto v = process::as_stopping_version(ctl.filtration, ctl.measure, sc)) return *v;
    throw PreconditionError("time " + sys.times[s].id + " is not a stopping time of the filtration of control " +
                            ctl.id);
}

SigmaField stopped_field(const FiniteControlSystem& sys, std::size_t c, std::size_t s) {
    return process::sigma_at(sys.controls.at(c).filtration, stopping_version(sys, c, s));
}

bool classwise_le(const FiniteControlSystem& sys, std::size_t c, std::size_t s, std::size_t t) {
    for (auto d : sys.classes.at(t).members(c)) {
        if (!process::as_le(sys.controls[d].measure, sys.times[s].per_control[d], sys.times[t].per_control[d])) {
            return false;
        }
    }
    return true;
}

bool ClasswiseOrder::le(std::size_t c, std::size_t s, std::size_t t) {
    const auto key = std::make_tuple(t, sys_->classes.at(t).list_id(c), s);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    const bool v = classwise_le(*sys_, c, s, t);
    cache_.emplace(key, v);
    return v;
}

// ------------------------------------------------------------------ validation

void RuleVerdict::fail(Witness w) {
    passed = false;
    ++violations;
    if (witnesses.size() < kWitnessCap) witnesses.push_back(std::move(w));
}

bool ValidationReport::passed() const {
    return std::all_of(rules.begin(), rules.end(), [](const RuleVerdict& r) { return r.passed; });
}

const RuleVerdict* ValidationReport::find(const std::string& rule) const {
    for (const auto& r : rules) {
        if (r.rule == rule) return &r;
    }
    return nullptr;
}

namespace {

RuleVerdict check_structure(const FiniteControlSystem& sys) {
    RuleVerdict r{"structure"};
    const auto n = sys.space.size();
    const auto k = sys.controls.size();
    auto fail = [&](std::string detail) { r.fail(Witness{.detail = std::move(detail)}); };
    std::set<std::string> ids;
    for (const auto& ctl : sys.controls) {
        ++r.checked;
        if (!ids.insert(ctl.id).second) fail("duplicate control id " + ctl.id);
        if (ctl.filtration.stages().empty() || ctl.filtration.outcome_count() != n) {
            fail("control " + ctl.id + ": filtration outcome count mismatch");
        } else if (ctl.filtration.horizon() != sys.horizon) {
            fail("control " + ctl.id + ": filtration horizon " + std::to_string(ctl.filtration.horizon()) +
                 " differs from " + std::to_string(sys.horizon));
        }
        if (ctl.measure.size() != n) fail("control " + ctl.id + ": measure size mismatch");
        if (ctl.payoff.size() != n) fail("control " + ctl.id + ": payoff size mismatch");
        if (ctl.observed && (ctl.observed->outcome_count() != n || ctl.observed->horizon() != sys.horizon)) {
            fail("control " + ctl.id + ": observed process shape mismatch");
        }
    }
    std::set<std::string> time_ids;
    for (const auto& t : sys.times) {
        ++r.checked;
        if (!time_ids.insert(t.id).second) fail("duplicate time id " + t.id);
        if (t.per_control.size() != k) {
            fail("time " + t.id + ": " + std::to_string(t.per_control.size()) + " entries for " + std::to_string(k) +
                 " controls");
            continue;
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (t.per_control[c].size() != n) {
                fail("time " + t.id + ", control " + sys.controls[c].id + ": outcome count mismatch");
                continue;
            }
            for (auto v : t.per_control[c].values()) {
                if (v != kInfinity && v > sys.horizon) {
                    fail("time " + t.id + ", control " + sys.controls[c].id + ": value beyond horizon");
                    break;
                }
            }
        }
    }
    if (sys.classes.size() != sys.times.size()) {
        fail("class tables: " + std::to_string(sys.classes.size()) + " for " + std::to_string(sys.times.size()) +
             " times");
    } else {
        for (std::size_t s = 0; s < sys.classes.size(); ++s) {
            ++r.checked;
            if (sys.classes[s].control_count() != k) {
                fail("time " + sys.times[s].id + ": class entries missing");
                continue;
            }
            for (std::size_t id = 0; id < sys.classes[s].list_count(); ++id) {
                for (auto d : sys.classes[s].list(id)) {
                    if (d >= k) fail("time " + sys.times[s].id + ": class member index out of range");
                }
            }
        }
    }
    return r;
}

}  // namespace

ValidationReport validate(const FiniteControlSystem& sys) {
    ValidationReport report;
    report.rules.push_back(check_structure(sys));
    if (!report.rules.back().passed) return report;

    const auto k = sys.controls.size();
    const auto nt = sys.times.size();
    auto cid = [&](std::size_t c) { return sys.controls[c].id; };

    // axiom 1: control times
    RuleVerdict times_rule{"control-times"};
    std::vector<std::vector<std::optional<SigmaField>>> fields(nt, std::vector<std::optional<SigmaField>>(k));
    for (std::size_t s = 0; s < nt; ++s) {
        for (std::size_t c = 0; c < k; ++c) {
            ++times_rule.checked;
            try {
                fields[s][c] = stopped_field(sys, c, s);
            } catch (const PreconditionError&) {
                times_rule.fail(Witness{.control = cid(c), .time = time_label(sys, s),
                                        .detail = "not a stopping time of G^c, even up to null outcomes"});
            }
        }
    }

    RuleVerdict initial{"initial-field"};
    for (std::size_t c = 0; c < k; ++c) {
        ++initial.checked;
        const auto& g0 = sys.controls[c].filtration.stage(0);
        const auto& mu = sys.controls[c].measure;
        std::optional<std::size_t> atom;
        for (std::size_t w = 0; w < mu.size(); ++w) {
            if (mu.is_null(w)) continue;
            if (!atom) {
                atom = g0.atom_of(w);
            } else if (*atom != g0.atom_of(w)) {
                initial.fail(Witness{.control = cid(c), .outcome = w, .detail = "G^c_0 is not P^c-trivial"});
                break;
            }
        }
        if (c > 0) {
            const auto& ref = sys.controls[0];
            if (!(ref.filtration.stage(0) == g0) || !finite::measures_agree_on(ref.measure, mu, g0)) {
                initial.fail(Witness{.control = cid(c), .other_control = ref.id,
                                     .detail = "initial fields or their laws differ"});
            }
        }
    }

    RuleVerdict membership{"axiom-2-membership"};
    RuleVerdict equal_times{"axiom-3-equal-times"};
    RuleVerdict invariance{"axiom-4-time-invariance"};
    RuleVerdict nesting{"axiom-5-nesting"};
    RuleVerdict partition{"axiom-6-partition"};
    RuleVerdict extremes{"axiom-7-extremes"};
    RuleVerdict stability{"stability-under-stopping"};

    for (std::size_t s = 0; s < nt; ++s) {
        const auto& table = sys.classes[s];
        const auto& time = sys.times[s];
        for (std::size_t c = 0; c < k; ++c) {
            const auto& members = table.members(c);
            const auto& pc = sys.controls[c].measure;

            ++membership.checked;
            if (!table.contains(c, c)) {
                membership.fail(Witness{.control = cid(c), .time = time.id, .detail = "c not in D(c,S)"});
            }

            ++partition.checked;
            for (auto d : members) {
                if (table.list_id(d) != table.list_id(c)) {
                    partition.fail(Witness{.control = cid(c), .other_control = cid(d), .time = time.id,
                                           .lhs = members_to_string(sys, members),
                                           .rhs = members_to_string(sys, table.members(d)),
                                           .detail = "d in D(c,S) but D(d,S) differs"});
                    break;
                }
            }

            ++extremes.checked;
            if (all_equal_to(pc, time.per_control[c], kInfinity) && members != std::vector<std::size_t>{c}) {
                extremes.fail(Witness{.control = cid(c), .time = time.id, .lhs = members_to_string(sys, members),
                                      .detail = "S^c is infinity but D(c,S) is not {c}"});
            }
            if (all_equal_to(pc, time.per_control[c], 0) && members.size() != k) {
                extremes.fail(Witness{.control = cid(c), .time = time.id, .lhs = members_to_string(sys, members),
                                      .detail = "S^c is 0 but D(c,S) is not C"});
            }

            for (auto d : members) {
                if (d == c) continue;
                const auto& pd = sys.controls[d].measure;
                ++equal_times.checked;
                auto w = first_difference(pc, time.per_control[c], time.per_control[d]);
                if (!w) w = first_difference(pd, time.per_control[c], time.per_control[d]);
                if (w) {
                    equal_times.fail(Witness{.control = cid(c), .other_control = cid(d), .time = time.id, .outcome = *w,
                                             .lhs = process::time_to_string(time.per_control[c][*w]),
                                             .rhs = process::time_to_string(time.per_control[d][*w]),
                                             .detail = "S^c differs from S^d on a charged outcome"});
                }

                ++stability.checked;
                if (!fields[s][c] || !fields[s][d]) continue;
                if (!fields_agree(*fields[s][c], *fields[s][d], pc, pd)) {
                    stability.fail(Witness{.control = cid(c), .other_control = cid(d), .time = time.id,
                                           .detail = "G^c_{S^c} differs from G^d_{S^d}"});
                } else if (!finite::measures_agree_on(pc, pd, *fields[s][c]) ||
                           !finite::measures_agree_on(pc, pd, *fields[s][d])) {
                    stability.fail(Witness{.control = cid(c), .other_control = cid(d), .time = time.id,
                                           .detail = "P^c and P^d differ on G^c_{S^c}"});
                }
            }
        }
    }

    // axioms 4 and 5 compare pairs of times
    ClasswiseOrder order(sys);
    for (std::size_t c = 0; c < k; ++c) {
        const auto& pc = sys.controls[c].measure;
        for (std::size_t s = 0; s < nt; ++s) {
            for (std::size_t t = 0; t < nt; ++t) {
                if (s == t) continue;
                const auto& ds = sys.classes[s].members(c);
                const auto& dt = sys.classes[t].members(c);
                if (process::as_equal(pc, sys.times[s].per_control[c], sys.times[t].per_control[c])) {
                    ++invariance.checked;
                    if (ds != dt) {
                        invariance.fail(Witness{.control = cid(c), .time = sys.times[s].id,
                                                .other_time = sys.times[t].id, .lhs = members_to_string(sys, ds),
                                                .rhs = members_to_string(sys, dt),
                                                .detail = "S^c = T^c a.s. but D(c,S) != D(c,T)"});
                    }
                }
                if (order.le(c, s, t)) {
                    ++nesting.checked;
                    const bool subset = std::includes(ds.begin(), ds.end(), dt.begin(), dt.end());
                    if (!subset) {
                        nesting.fail(Witness{.control = cid(c), .time = sys.times[s].id,
                                             .other_time = sys.times[t].id, .lhs = members_to_string(sys, dt),
                                             .rhs = members_to_string(sys, ds),
                                             .detail = "S <= T on D(c,T) but D(c,T) is not inside D(c,S)"});
                    }
                }
            }
        }
    }

    report.rules.push_back(std::move(times_rule));
    report.rules.push_back(std::move(initial));
    report.rules.push_back(std::move(membership));
    report.rules.push_back(std::move(equal_times));
    report.rules.push_back(std::move(invariance));
    report.rules.push_back(std::move(nesting));
    report.rules.push_back(std::move(partition));
    report.rules.push_back(std::move(extremes));
    report.rules.push_back(std::move(stability));
    return report;
}

}  // namespace bellman::control
