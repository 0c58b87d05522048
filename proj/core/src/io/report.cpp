#include "bellman/io/report.hpp"

#include "bellman/control_engine.hpp"
#include "bellman/errors.hpp"

#include "json.hpp"
#include <openssl/evp.h>

#include <array>
#include <cstdio>
#include <memory>

#ifndef BELLMAN_VERSION
#define BELLMAN_VERSION "0.0.0"
#endif

namespace bellman::io {

using control::FiniteControlSystem;
using control::Witness;
using json = nlohmann::ordered_json;

namespace {

constexpr std::size_t kLatticeWitnessCap = 20;

json header(const char* command) {
    json doc;
    doc["schema"] = kReportSchema;
    doc["tool_version"] = tool_version();
    doc["command"] = command;
    return doc;
}

json witness_json(const Witness& w) {
    json out = json::object();
    if (!w.control.empty()) out["control"] = w.control;
    if (!w.other_control.empty()) out["other_control"] = w.other_control;
    if (!w.time.empty()) out["time"] = w.time;
    if (!w.other_time.empty()) out["other_time"] = w.other_time;
    if (w.outcome) out["outcome"] = *w.outcome;
    if (!w.lhs.empty()) out["lhs"] = w.lhs;
    if (!w.rhs.empty()) out["rhs"] = w.rhs;
    if (!w.detail.empty()) out["detail"] = w.detail;
    return out;
}

json witnesses_json(const std::vector<Witness>& ws) {
    json out = json::array();
    for (const auto& w : ws) out.push_back(witness_json(w));
    return out;
}

json principle_json(const control::PrincipleVerdict& v) {
    return json{{"name", v.name},
                {"passed", v.passed},
                {"checked", v.checked},
                {"violations", v.violations},
                {"witnesses", witnesses_json(v.witnesses)}};
}

json rational_row(const std::vector<Rational>& row) {
    json out = json::array();
    for (const auto& v : row) out.push_back(to_string(v));
    return out;
}

json process_json(const process::DiscreteProcess& x) {
    json out = json::array();
    for (const auto& row : x.rows()) out.push_back(rational_row(row));
    return out;
}

json time_json(const process::RandomTime& s) {
    json out = json::array();
    for (auto v : s.values()) {
        if (v == process::kInfinity) {
            out.push_back("inf");
        } else {
            out.push_back(v);
        }
    }
    return out;
}

json estimate_json(const mc::Estimate& e) {
    return json{{"mean", e.mean}, {"std_error", e.std_error}, {"n", e.n}};
}

const char* cost_name(mc::CostModel m) {
    switch (m) {
        case mc::CostModel::case_a: return "a";
        case mc::CostModel::case_b: return "b";
        case mc::CostModel::custom: return "custom";
    }
    return "custom";
}

json switching_config_json(const mc::SwitchingConfig& cfg) {
    return json{{"case", cost_name(cfg.cost_model)},
                {"alpha", cfg.alpha},
                {"x", cfg.x},
                {"epsilon", cfg.epsilon},
                {"dt", cfg.dt},
                {"t_max", cfg.t_max},
                {"paths", cfg.n_paths},
                {"seed", cfg.seed},
                {"antithetic", cfg.antithetic}};
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

std::string tool_version() { return BELLMAN_VERSION; }

std::string sha256_hex(std::string_view data) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), data.data(), data.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    std::string hex;
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof buf, "%02x", digest[i]);
        hex += buf;
    }
    return hex;
}

VerifyResult run_verify(const FiniteControlSystem& input, std::string_view input_text, const std::string& input_name,
                        const VerifyOptions& options) {
    const auto sys = control::with_extremal_times(input);
    VerifyResult result;
    json doc = header("verify");
    doc["input"] = json{{"name", input_name}, {"sha256", sha256_hex(input_text)}};

    json summary;
    summary["outcomes"] = sys.space.size();
    summary["horizon"] = sys.horizon;
    json ids = json::array();
    for (const auto& c : sys.controls) ids.push_back(c.id);
    summary["controls"] = ids;
    json tids = json::array();
    for (const auto& t : sys.times) tids.push_back(t.id);
    summary["times"] = tids;
    doc["system"] = summary;

    const auto validation = control::validate(sys);
    result.validation_passed = validation.passed();
    json rules = json::array();
    for (const auto& r : validation.rules) {
        rules.push_back(json{{"rule", r.rule},
                             {"passed", r.passed},
                             {"checked", r.checked},
                             {"violations", r.violations},
                             {"witnesses", witnesses_json(r.witnesses)}});
    }
    doc["validation"] = json{{"passed", result.validation_passed}, {"rules", rules}};

    const auto solution = control::solve(sys);
    result.value = solution.value ? to_string(*solution.value) : "-inf";
    for (auto c : solution.optimal) result.optimal.push_back(sys.controls[c].id);

    bool math_ok = result.validation_passed;
    if (sys.control_count() == 0) {
        doc["lattice"] = json{{"checked", 0}, {"skipped", 0}};
        doc["bellman"] = json{{"value", result.value},
                              {"optimal", json::array()},
                              {"notes", json::array({"no controls: the value is the supremum of the empty set"})}};
    } else {
        std::optional<control::SystemTables> tables;
        try {
            tables = control::compute_tables(sys);
        } catch (const PreconditionError& e) {
            math_ok = false;
            doc["error"] = e.what();
        }
        if (tables) {
            std::size_t checked = 0;
            std::size_t skipped = 0;
            std::size_t c1 = 0;
            std::size_t c2 = 0;
            std::size_t c3 = 0;
            std::size_t implication_violations = 0;
            json lattice_witnesses = json::array();
            for (std::size_t s = 0; s < sys.time_count(); ++s) {
                const auto& table = sys.classes[s];
                for (std::size_t id = 0; id < table.list_count(); ++id) {
                    // any member whose class is this list represents it
                    std::optional<std::size_t> rep;
                    for (auto c : table.list(id)) {
                        if (table.list_id(c) == id) {
                            rep = c;
                            break;
                        }
                    }
                    if (!rep) continue;
                    if (tables->field[s][*rep].atoms().size() > options.lattice_atom_limit) {
                        ++skipped;
                        continue;
                    }
                    const auto v = control::lattice_check(sys, *tables, *rep, s, 0, std::nullopt);
                    ++checked;
                    c1 += v.c1;
                    c2 += v.c2;
                    c3 += v.c3;
                    const bool counts = !v.implication_ok || (options.require_lattice && !v.c3);
                    if (!v.implication_ok) ++implication_violations;
                    if (counts) math_ok = false;
                    if (!v.c3 || !v.implication_ok) {
                        for (const auto& w : v.witnesses) {
                            if (lattice_witnesses.size() < kLatticeWitnessCap) lattice_witnesses.push_back(witness_json(w));
                        }
                    }
                }
            }
            doc["lattice"] = json{{"eps", "0"},
                                  {"cap", "inf"},
                                  {"checked", checked},
                                  {"skipped", skipped},
                                  {"c1", c1},
                                  {"c2", c2},
                                  {"c3", c3},
                                  {"implication_violations", implication_violations},
                                  {"required", options.require_lattice},
                                  {"witnesses", lattice_witnesses}};

            const auto bell = control::verify_bellman(sys, *tables);
            json optimal = json::array();
            for (const auto& id : result.optimal) optimal.push_back(id);
            json principles = json::array();
            for (const auto* p : {&bell.b1, &bell.b2, &bell.b3, &bell.b4, &bell.b5}) {
                principles.push_back(principle_json(*p));
                if (!p->passed) math_ok = false;
            }
            doc["bellman"] = json{{"value", result.value},
                                  {"optimal", optimal},
                                  {"chain", bell.chain},
                                  {"principles", principles},
                                  {"notes", bell.notes}};
        }
    }
    result.passed = math_ok;
    doc["passed"] = result.passed;
    result.document = dump(doc);
    return result;
}

std::string campaign_document(const process::CampaignOptions& options, const process::CampaignReport& report) {
    json doc = header("galmarino");
    doc["options"] = json{{"instances", options.instances},
                          {"max_outcomes", options.max_outcomes},
                          {"max_horizon", options.max_horizon},
                          {"seed", options.seed},
                          {"allow_nonstopping", options.allow_nonstopping}};
    doc["instances"] = report.instances;
    doc["passes"] = json{{"galmarino", report.galmarino_pass},
                         {"stopping_time_equivalence", report.lemma_pass},
                         {"observational_consistency", report.consistency_pass},
                         {"information_monotone", report.monotone_pass}};
    json violations = json::array();
    for (const auto& v : report.violations) {
        json item{{"instance", v.instance}, {"check", v.check}, {"x", process_json(v.x)}, {"s", time_json(v.s)}};
        if (v.y) item["y"] = process_json(*v.y);
        if (v.u) item["u"] = time_json(*v.u);
        if (!v.detail.empty()) item["detail"] = v.detail;
        violations.push_back(item);
    }
    doc["violations"] = violations;
    doc["passed"] = report.clean();
    return dump(doc);
}

std::string switching_document(const std::vector<SwitchingRun>& runs) {
    json doc = header("mc switching");
    json items = json::array();
    bool all = true;
    for (const auto& r : runs) {
        items.push_back(json{{"strategy", r.strategy},
                             {"config", switching_config_json(r.config)},
                             {"estimate", estimate_json(r.estimate.payoff)},
                             {"tail_bound", r.estimate.tail_bound},
                             {"mean_switches", r.estimate.mean_switches},
                             {"steps", r.estimate.steps},
                             {"target", r.target},
                             {"allowance", r.allowance},
                             {"passed", r.passed}});
        all = all && r.passed;
    }
    doc["runs"] = items;
    doc["passed"] = all;
    return dump(doc);
}

std::string study_document(const mc::SwitchingConfig& cfg, const mc::ConvergenceStudy& study, double target,
                           bool passed) {
    json doc = header("mc switching");
    doc["config"] = switching_config_json(cfg);
    json rows = json::array();
    for (const auto& r : study.rows) {
        rows.push_back(json{{"epsilon", r.epsilon}, {"dt", r.dt}, {"estimate", estimate_json(r.estimate)}});
    }
    doc["rows"] = rows;
    doc["nondecreasing"] = study.nondecreasing;
    doc["extrapolated"] = json{{"value", study.extrapolated}, {"std_error", study.extrapolated_se}};
    doc["target"] = target;
    doc["passed"] = passed;
    return dump(doc);
}

std::string poisson_document(const mc::PoissonDriftConfig& cfg, const mc::PoissonDriftReport& report, bool passed) {
    json doc = header("mc poisson");
    doc["config"] = json{{"alpha", cfg.alpha},
                         {"t", cfg.t},
                         {"t_max", cfg.t_max},
                         {"paths", cfg.n_paths},
                         {"seed", cfg.seed},
                         {"p_plus", cfg.p_plus}};
    doc["j_hat"] = json{{"estimate", estimate_json(report.j_hat)}, {"target", report.v_target}};
    doc["gap"] = json{{"estimate", estimate_json(report.gap)}, {"target", report.gap_target}};
    doc["bound"] = json{{"estimate", estimate_json(report.bound)}, {"target", report.bound_target}};
    doc["tail_bound"] = report.tail_bound;
    doc["passed"] = passed;
    return dump(doc);
}

std::string verification_document(const std::string& label, const mc::VerificationReport& report) {
    json doc = header("mc verify-lemma");
    doc["candidate"] = label;
    json conditions = json::array();
    for (const auto& c : report.conditions) {
        conditions.push_back(json{{"name", c.name},
                                  {"equality", c.equality},
                                  {"points", c.points},
                                  {"violations", c.violations},
                                  {"max_residual", c.max_residual},
                                  {"max_abs_residual", c.max_abs_residual},
                                  {"worst_z", c.worst_z},
                                  {"worst_t", c.worst_t},
                                  {"strict_points", c.strict_points},
                                  {"strict_sign_ok", c.strict_sign_ok},
                                  {"passed", c.passed()}});
    }
    doc["conditions"] = conditions;
    doc["passed"] = report.passed();
    return dump(doc);
}

}  // namespace bellman::io
