#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace bellman::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailed = 2;

struct VerifyArgs {
    std::string path;
    std::string out;
    bool require_lattice = false;
    std::size_t lattice_atom_limit = 16;
};

struct GalmarinoArgs {
    std::size_t campaign = 1000;
    std::size_t max_outcomes = 8;
    std::size_t max_horizon = 5;
    std::uint64_t seed = 1;
    bool allow_nonstopping = false;
    std::string out;
};

struct SwitchingArgs {
    std::string which = "a";
    double x = 0.0;
    double alpha = 1.0;
    double eps = 0.2;
    double dt = 0.01;
    std::optional<double> t_max;
    std::size_t paths = 100000;
    std::uint64_t seed = 1;
    /// never, threshold or both
    std::string strategy = "both";
    double l = 0.0;
    bool antithetic = false;
    std::vector<double> eps_grid;
    std::optional<double> tolerance;
    std::string json;
};

struct PoissonArgs {
    double alpha = 1.0;
    double t = 0.6931471805599453;
    double t_max = 0.0;
    std::size_t paths = 200000;
    std::uint64_t seed = 1;
    std::vector<double> t_grid;
    double tolerance = 0.005;
    std::string json;
};

struct LemmaArgs {
    std::string which = "b";
    double alpha = 1.0;
    std::optional<double> perturb;
    std::size_t order = 20;
    std::string json;
};

struct ExampleArgs {
    std::string name;
    std::string out;
    std::uint64_t seed = 1;
    std::size_t outcomes = 4;
    std::size_t horizon = 2;
    std::size_t instances = 20;
};

int run_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err);
int run_galmarino(const GalmarinoArgs& args, std::ostream& out, std::ostream& err);
int run_switching(const SwitchingArgs& args, std::ostream& out, std::ostream& err);
int run_poisson(const PoissonArgs& args, std::ostream& out, std::ostream& err);
int run_lemma(const LemmaArgs& args, std::ostream& out, std::ostream& err);
int run_example(const ExampleArgs& args, std::ostream& out, std::ostream& err);

}  // namespace bellman::cli
