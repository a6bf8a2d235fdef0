#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qcd {

/**
 * SplitMix64 stream generator.
 *
 * Output n is a bijective hash of seed + n * gamma, i.e. a counter-based
 * scheme: substreams can be derived from (seed, index) alone, so Monte
 * Carlo runs stay reproducible regardless of worker scheduling.
 */
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

    std::uint64_t next_u64() noexcept {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 random bits.
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal draw (Box-Muller, second value cached).
    double next_gaussian() noexcept {
        if (has_cached_) {
            has_cached_ = false;
            return cached_;
        }
        double u1 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        cached_ = r * std::sin(a);
        has_cached_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

/// Seed for an indexed substream; pure function of (root, index).
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) noexcept {
    SplitMix64 g(root + (index + 1) * 0x9E3779B97F4A7C15ULL);
    return g.next_u64();
}

} // namespace qcd
