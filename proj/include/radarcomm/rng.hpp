#pragma once

#include <cmath>
#include <cstdint>

namespace radarcomm::rng {

// Standard-library distributions are implementation-defined, so everything
// random in this project goes through these fixed algorithms: results must
// be bit-identical across runs, platforms, and thread counts.

inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
    return mix64(seed ^ (0x9E3779B97F4A7C15ull * (value + 1)));
}

inline double to_unit_double(std::uint64_t u) {
    return static_cast<double>(u >> 11) * 0x1.0p-53;  // [0, 1)
}

/// xoshiro256++ (Blackman & Vigna), seeded via splitmix64.
class Engine {
public:
    explicit Engine(std::uint64_t seed) {
        for (auto& word : state_) word = splitmix64(seed);
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    double next_double() { return to_unit_double(next_u64()); }

    /// Uniform integer in [0, n); multiply-shift map (bias < n / 2^64).
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
    }

    /// Poisson sample: Knuth's product method below mean 10, Hormann's PTRS
    /// transformed rejection above it.
    long long poisson(double mean);

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }
    std::uint64_t state_[4];
};

inline long long Engine::poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 10.0) {
        const double limit = std::exp(-mean);
        long long k = 0;
        double product = next_double();
        while (product > limit) {
            ++k;
            product *= next_double();
        }
        return k;
    }
    const double log_mean = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = next_double() - 0.5;
        const double v = next_double();
        const double us = 0.5 - std::fabs(u);
        const auto k = static_cast<long long>(
            std::floor((2.0 * a / us + b) * u + mean + 0.43));
        if (us >= 0.07 && v <= v_r) return k;
        if (k < 0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            static_cast<double>(k) * log_mean - mean - std::lgamma(static_cast<double>(k) + 1.0))
            return k;
    }
}

}  // namespace radarcomm::rng
