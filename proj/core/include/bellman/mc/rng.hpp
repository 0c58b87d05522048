#pragma once

// Philox4x32-10 counter-based generator. A (seed, stream) pair fixes a
// sequence, so every path owns its numbers regardless of which worker runs it.

#include <array>
#include <cmath>
#include <cstdint>

namespace bellman::mc {

class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter block(Counter ctr, Key key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = std::uint64_t{kM0} * ctr[0];
            const std::uint64_t p1 = std::uint64_t{kM1} * ctr[2];
            ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
                   static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
            key[0] += kW0;
            key[1] += kW1;
        }
        return ctr;
    }

private:
    static constexpr std::uint32_t kM0 = 0xD2511F53U;
    static constexpr std::uint32_t kM1 = 0xCD9E8D57U;
    static constexpr std::uint32_t kW0 = 0x9E3779B9U;
    static constexpr std::uint32_t kW1 = 0xBB67AE85U;
};

/// Uniform and standard normal draws for one stream.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream, bool negate_normals = false)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
          stream_(stream),
          sign_(negate_normals ? -1.0 : 1.0) {}

    /// Uniform on the open interval (0,1) with 53 random bits.
    double uniform() {
        if (used_ == 4) refill();
        const std::uint64_t hi = words_[used_++];
        const std::uint64_t lo = words_[used_++];
        return (static_cast<double>(((hi << 32) | lo) >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Box-Muller, both variates used.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return sign_ * spare_;
        }
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        const double theta = 2.0 * kPi * uniform();
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return sign_ * r * std::cos(theta);
    }

    /// Exponential with unit rate.
    double exponential() { return -std::log(uniform()); }

private:
    static constexpr double kPi = 3.14159265358979323846;

    void refill() {
        const Philox4x32::Counter ctr{static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                                      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
        words_ = Philox4x32::block(ctr, key_);
        ++counter_;
        used_ = 0;
    }

    Philox4x32::Key key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    Philox4x32::Counter words_{};
    int used_ = 4;
    double sign_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bellman::mc
