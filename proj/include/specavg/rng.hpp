#pragma once

#include <cstdint>

namespace specavg {

namespace detail {
inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}
} // namespace detail

/// splitmix64: tiny, fast, and good enough statistically for Monte-Carlo
/// sampling of bounded integrands. Chosen over std::mt19937_64 because seeds
/// can be derived arithmetically (see derive_seed), which keeps parallel
/// sampling reproducible independent of thread scheduling.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += detail::kGolden;
        return detail::mix64(state_);
    }

    /// Uniform double in [-1/2, 1/2) with 53 significant bits.
    double next_centered_uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53 - 0.5;
    }

    /// Uniform double in [0, 1).
    double next_unit_uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

/// Statistically independent per-task seed from a master seed and a task
/// index. Equivalent to jumping a splitmix64 stream ahead by index+1 steps,
/// so task streams never collide with each other or with the master stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return detail::mix64(master + detail::kGolden * (index + 1));
}

} // namespace specavg
