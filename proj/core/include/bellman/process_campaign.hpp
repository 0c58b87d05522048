#pragma once

// Randomized campaigns over (process, time) instances.

#include "bellman/process_algebra.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace bellman::process {

struct CampaignOptions {
    std::size_t instances = 1000;
    std::size_t max_outcomes = 8;
    std::size_t max_horizon = 5;
    std::uint64_t seed = 1;
    /// Draw arbitrary random times instead of stopping times.
    bool allow_nonstopping = false;
};

struct CampaignViolation {
    std::size_t instance = 0;
    std::string check;
    DiscreteProcess x;
    RandomTime s;
    std::optional<DiscreteProcess> y;
    std::optional<RandomTime> u;
    std::string detail;
};

struct CampaignReport {
    std::size_t instances = 0;
    std::size_t galmarino_pass = 0;
    std::size_t lemma_pass = 0;
    std::size_t consistency_pass = 0;
    std::size_t monotone_pass = 0;
    std::vector<CampaignViolation> violations;

    bool clean() const noexcept { return violations.empty(); }
};

/// Process with n outcomes, times 0..horizon, values drawn from {0..alphabet-1}.
DiscreteProcess random_process(std::mt19937_64& rng, std::size_t n, std::size_t horizon, std::size_t alphabet);

/// Stopping time of f: walks the atoms of each stage and stops a whole
/// still-running atom with probability p; survivors end at infinity.
RandomTime random_stopping_time(std::mt19937_64& rng, const Filtration& f, double p = 0.35);

/// Arbitrary time with values in {0..horizon, inf}.
RandomTime random_time(std::mt19937_64& rng, std::size_t n, std::size_t horizon);

/// Y equal to X up to and including S, fresh values afterwards.
DiscreteProcess glue_after(std::mt19937_64& rng, const DiscreteProcess& x, const RandomTime& s, std::size_t alphabet);

/// Galmarino, stopping-time equivalence, observational consistency and
/// monotonicity of information over randomized instances. In non-stopping
/// mode the stopped field is taken as the family of admissible events, so the
/// checks are expected to find violations.
CampaignReport run_galmarino_campaign(const CampaignOptions& options);

}  // namespace bellman::process
