#pragma once

#include <cmath>
#include <cstdint>

namespace sumhess {

/// Counter-based deterministic RNG. Every random quantity in the project is
/// derived from one explicit 64-bit seed; per-sample streams come from
/// per_sample(seed, index), so sweeps are reproducible under any
/// parallel schedule.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform on a log scale over [lo, hi], lo, hi > 0.
    double log_uniform(double lo, double hi) {
        return std::exp(uniform(std::log(lo), std::log(hi)));
    }

    /// Standard normal via Box-Muller (no library distribution, so streams
    /// are identical across standard library implementations).
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(6.283185307179586476925286766559 * u2);
    }

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

/// Stream for sample `index` of a sweep seeded with `seed`.
inline SplitMix64 per_sample(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 mix(seed ^ (0x9E3779B97F4A7C15ull * (index + 1)));
    return SplitMix64(mix.next_u64());
}

/// Direction stream decoupled from the cone stream of the same index.
inline SplitMix64 per_sample_direction(std::uint64_t seed, std::uint64_t index) {
    return per_sample(seed ^ 0xD1CEC7105EEDull, index);
}

} // namespace sumhess
