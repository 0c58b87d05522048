#pragma once

// Random coherent control systems closed under gluing, and mutations that
// break the closure.

#include "bellman/control_system.hpp"

#include <cstddef>
#include <optional>
#include <random>
#include <string>

namespace bellman::control {

struct RandomSystemOptions {
    std::size_t max_controls = 4;
    std::size_t max_outcomes = 6;
    std::size_t max_horizon = 3;
    /// Lets the law after the decision depend on the action taken.
    bool control_dependent_measure = true;
};

/// A common process Y up to a decision time s generates at most two atoms;
/// each control picks an action on each atom at time s, after which it
/// observes one of two processes and, optionally, changes the conditional law
/// on that atom. The controls are all such action maps, so the family is
/// closed under gluing on any event of G_t with t < s.
FiniteControlSystem random_coherent_system(std::mt19937_64& rng, const RandomSystemOptions& options = {});

enum class MutationKind { class_enlarged, glued_control_deleted };

std::string to_string(MutationKind kind);

struct Mutation {
    MutationKind kind = MutationKind::class_enlarged;
    FiniteControlSystem system;
    std::string description;
};

/// Merges two unordered singleton classes at some t >= s, or removes a
/// control that is the only upper bound of two others at some t < s.
/// nullopt when the system admits neither.
std::optional<Mutation> mutate(std::mt19937_64& rng, const FiniteControlSystem& sys);

/// A random sub-sigma-field of g obtained by merging atoms.
SigmaField random_coarsening(std::mt19937_64& rng, const SigmaField& g);

}  // namespace bellman::control
