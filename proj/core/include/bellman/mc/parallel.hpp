#pragma once

// Path-parallel execution with a reduction that does not depend on the
// number of workers.

#include <cstddef>
#include <functional>
#include <span>

namespace bellman::mc {

/// BELLMAN_THREADS when set to a positive integer, else the hardware count.
std::size_t default_workers();

/// requested == 0 means default_workers().
std::size_t resolve_workers(std::size_t requested);

/// Runs body(i) for i in [0, count) on `workers` threads in fixed-size chunks.
/// The body must write only to state owned by index i.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

/// Pairwise summation in index order.
double pairwise_sum(std::span<const double> values);

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
};

/// Sample mean and standard error, both reduced pairwise in index order.
Estimate estimate(std::span<const double> samples);

}  // namespace bellman::mc
