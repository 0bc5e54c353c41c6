#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace mdplab {

/// splitmix64 finalizer. Used both as a stream-splitting hash and to expand
/// seeds; the constants are the standard ones.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

/// Derives one child seed from an ordered tuple of parts. Collision-safe
/// enough for stream splitting; order-sensitive by construction.
inline std::uint64_t seed_hash(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x8f1bbcdcbfa53e0bull;
    for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p));
    return h;
}

/// Deterministic RNG: mt19937_64 (bit-exact output is pinned by the C++
/// standard) plus hand-rolled samplers, so draws are reproducible across
/// standard-library implementations. std::*_distribution is never used.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n). Rejection sampling, unbiased.
    std::uint32_t uniform_int(std::uint32_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v = next_u64();
        while (v >= limit) v = next_u64();
        return static_cast<std::uint32_t>(v % n);
    }

    /// Gaussian with mean 0 via the Marsaglia polar method. Pairs are
    /// generated at once; the spare is cached between calls.
    double normal(double stddev) {
        if (have_spare_) {
            have_spare_ = false;
            return spare_ * stddev;
        }
        double u, v, s;
        do {
            u = 2.0 * next_double() - 1.0;
            v = 2.0 * next_double() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m * stddev;
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace mdplab
