#include "bellman/mc/parallel.hpp"

#include "bellman/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace bellman::mc {

std::size_t default_workers() {
    if (const char* env = std::getenv("BELLMAN_THREADS"); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != nullptr && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        throw ConfigError("BELLMAN_THREADS must be a positive integer, got '" + std::string(env) + "'");
    }
    return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

std::size_t resolve_workers(std::size_t requested) { return requested == 0 ? default_workers() : requested; }

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body) {
    constexpr std::size_t kChunk = 256;
    workers = std::max<std::size_t>(1, std::min(workers, (count + kChunk - 1) / kChunk));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto run = [&] {
        try {
            for (;;) {
                const auto begin = next.fetch_add(kChunk);
                if (begin >= count) return;
                const auto end = std::min(count, begin + kChunk);
                for (auto i = begin; i < end; ++i) body(i);
            }
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
            next = count;
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const auto half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

Estimate estimate(std::span<const double> samples) {
    Estimate e;
    e.n = samples.size();
    if (e.n == 0) return e;
    e.mean = pairwise_sum(samples) / static_cast<double>(e.n);
    if (e.n > 1) {
        std::vector<double> sq(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) sq[i] = (samples[i] - e.mean) * (samples[i] - e.mean);
        const double var = pairwise_sum(sq) / static_cast<double>(e.n - 1);
        e.std_error = std::sqrt(var / static_cast<double>(e.n));
    }
    return e;
}

}  // namespace bellman::mc
