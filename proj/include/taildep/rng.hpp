#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace taildep {

/// splitmix64 finalizer. Bijective avalanche mix on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stable sub-stream derivation: seed' = mix(mix(mix(master) ^ a) ^ b).
/// This formula is part of the reproducibility contract; changing it
/// changes every seeded output.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return mix64(mix64(mix64(master) ^ a) ^ b);
}

/// Seeded random stream. The engine is std::mt19937_64, whose output
/// sequence is pinned by the standard; all variate mappings below are
/// spelled out explicitly so draws are identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on (0, 1].
    double uniform01_open_low() { return 1.0 - uniform01(); }

    /// Uniform integer in {0, ..., bound-1}, unbiased via rejection.
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % bound;
    }

    /// Standard exponential, inverse transform.
    double exponential() { return -std::log(uniform01_open_low()); }

    /// Pareto with survival P(Z > x) = x^{-alpha} on [1, inf).
    double pareto(double alpha) { return std::pow(uniform01_open_low(), -1.0 / alpha); }

    /// Fisher-Yates shuffle of v[first..last).
    template <typename T>
    void shuffle(std::vector<T>& v, std::size_t first, std::size_t last) {
        for (std::size_t i = last - 1; i > first; --i) {
            const std::size_t j = first + uniform_below(i - first + 1);
            std::swap(v[i], v[j]);
        }
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        if (v.size() > 1) shuffle(v, 0, v.size());
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace taildep
