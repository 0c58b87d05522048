#include "commands.hpp"

#include "bellman/errors.hpp"
#include "bellman/io/report.hpp"

#include "CLI11.hpp"

#include <iostream>

using namespace bellman::cli;

int main(int argc, char** argv) {
    CLI::App app{"Exact Bellman-system verification and Monte Carlo checks for stochastic control"};
    app.set_version_flag("--version", bellman::io::tool_version());
    app.require_subcommand(1);

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Validate a control system file and check Bellman's principle");
    verify_cmd->add_option("path", verify.path, "System file")->required()->check(CLI::ExistingFile);
    verify_cmd->add_option("--out", verify.out, "Write the report here instead of standard output");
    verify_cmd->add_flag("--require-lattice", verify.require_lattice,
                         "Fail when some class lacks the upwards lattice property");
    verify_cmd->add_option("--lattice-atom-limit", verify.lattice_atom_limit,
                           "Skip lattice checks on fields with more atoms")
        ->capture_default_str();

    GalmarinoArgs galmarino;
    auto* galmarino_cmd = app.add_subcommand("galmarino", "Randomized campaign over processes and stopping times");
    galmarino_cmd->add_option("--campaign", galmarino.campaign, "Number of instances")->capture_default_str();
    galmarino_cmd->add_option("--max-outcomes", galmarino.max_outcomes)->capture_default_str()->check(CLI::PositiveNumber);
    galmarino_cmd->add_option("--max-horizon", galmarino.max_horizon)->capture_default_str();
    galmarino_cmd->add_option("--seed", galmarino.seed)->capture_default_str();
    galmarino_cmd->add_flag("--allow-nonstopping", galmarino.allow_nonstopping,
                            "Draw arbitrary random times; violations are then expected");
    galmarino_cmd->add_option("--out", galmarino.out, "Write the report here instead of standard output");

    auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo and numerical checks");
    mc_cmd->require_subcommand(1);

    SwitchingArgs switching;
    auto* sw = mc_cmd->add_subcommand("switching", "Brownian switching game");
    sw->add_option("--case", switching.which, "a or b")->capture_default_str()->check(CLI::IsMember({"a", "b"}));
    sw->add_option("--x", switching.x)->capture_default_str();
    sw->add_option("--alpha", switching.alpha)->capture_default_str();
    sw->add_option("--eps", switching.eps, "Minimal spacing between switches")->capture_default_str();
    sw->add_option("--dt", switching.dt)->capture_default_str();
    sw->add_option("--t-max", switching.t_max, "Truncation horizon (default: smallest of 20, 40, ... with a small tail)");
    sw->add_option("--paths", switching.paths)->capture_default_str();
    sw->add_option("--seed", switching.seed)->capture_default_str();
    sw->add_option("--strategy", switching.strategy)
        ->capture_default_str()
        ->check(CLI::IsMember({"never", "threshold", "both"}));
    sw->add_option("--l", switching.l, "Switching threshold: switch when Z <= -l")->capture_default_str();
    sw->add_flag("--antithetic", switching.antithetic);
    sw->add_option("--eps-grid", switching.eps_grid, "Strictly decreasing epsilons (case b)")->delimiter(',');
    sw->add_option("--tolerance", switching.tolerance);
    sw->add_option("--json", switching.json, "Also write a JSON report");

    PoissonArgs poisson;
    auto* po = mc_cmd->add_subcommand("poisson", "Tracking a Poisson process with random drifts");
    po->add_option("--alpha", poisson.alpha)->capture_default_str();
    po->add_option("--t", poisson.t, "Deviation time")->capture_default_str();
    po->add_option("--t-max", poisson.t_max, "Truncation horizon (0: 40/alpha)")->capture_default_str();
    po->add_option("--paths", poisson.paths)->capture_default_str();
    po->add_option("--seed", poisson.seed)->capture_default_str();
    po->add_option("--t-grid", poisson.t_grid, "Report the gap at each of these times")->delimiter(',');
    po->add_option("--tolerance", poisson.tolerance)->capture_default_str();
    po->add_option("--json", poisson.json, "Also write a JSON report");

    LemmaArgs lemma;
    auto* vl = mc_cmd->add_subcommand("verify-lemma", "Residuals of the verification conditions on a grid");
    vl->add_option("--case", lemma.which, "a or b")->capture_default_str()->check(CLI::IsMember({"a", "b"}));
    vl->add_option("--alpha", lemma.alpha)->capture_default_str();
    vl->add_option("--perturb", lemma.perturb, "Add this multiple of z^2 to the candidate");
    vl->add_option("--order", lemma.order, "Gauss-Legendre points per panel")
        ->capture_default_str()
        ->check(CLI::IsMember({10, 20, 30}));
    vl->add_option("--json", lemma.json, "Also write a JSON report");

    ExampleArgs example;
    auto* ex = app.add_subcommand("example", "Worked examples");
    ex->add_option("name", example.name, "box-picking or snell")
        ->required()
        ->check(CLI::IsMember({"box-picking", "snell"}));
    ex->add_option("--out", example.out, "Write the report here instead of standard output");
    ex->add_option("--seed", example.seed)->capture_default_str();
    ex->add_option("--outcomes", example.outcomes)->capture_default_str();
    ex->add_option("--horizon", example.horizon)->capture_default_str();
    ex->add_option("--instances", example.instances)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        if (*verify_cmd) return run_verify(verify, std::cout, std::cerr);
        if (*galmarino_cmd) return run_galmarino(galmarino, std::cout, std::cerr);
        if (*sw) return run_switching(switching, std::cout, std::cerr);
        if (*po) return run_poisson(poisson, std::cout, std::cerr);
        if (*vl) return run_lemma(lemma, std::cout, std::cerr);
        if (*ex) return run_example(example, std::cout, std::cerr);
    } catch (const bellman::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const bellman::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailed;
    }
    return kExitUsage;
}
