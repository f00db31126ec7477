#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ehrp {

/// SplitMix64 mixer; used for seed derivation and one-shot draws where
/// constructing a full engine would be wasteful (e.g. per-link shadowing).
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) from the top 53 bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

private:
    std::uint64_t state_;
};

/// Derives an independent child seed from a base seed and up to two salts.
/// Used to split deterministic substreams (deployment, shadowing, per-solve
/// ant walks) so that draw counts in one stream never perturb another.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt_a,
                                 std::uint64_t salt_b = 0) {
    SplitMix64 m0(base);
    SplitMix64 m1(m0.next() ^ (salt_a + 0x9e3779b97f4a7c15ull));
    SplitMix64 m2(m1.next() ^ (salt_b + 0xc2b2ae3d27d4eb4full));
    return m2.next();
}

/// Deterministic RNG wrapper. mt19937_64 output is fully specified by the
/// standard and the uniform/normal transforms below avoid the
/// implementation-defined std::*_distribution adapters, so sequences are
/// reproducible bit-for-bit across compilers.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Unbiased integer in [0, n); n must be >= 1.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = ~std::uint64_t{0} - ~std::uint64_t{0} % n;
        std::uint64_t x = eng_();
        while (x >= limit) x = eng_();
        return x % n;
    }

    /// Gaussian draw via Box-Muller (two fresh uniforms, no cached spare).
    double normal(double mean, double sigma) {
        const double u1 = 1.0 - next_double();  // (0, 1]
        const double u2 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(2.0 * M_PI * u2);
    }

private:
    std::mt19937_64 eng_;
};

/// One-shot zero-mean Gaussian keyed by (seed, a, b); same key, same value.
inline double keyed_normal(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                           double sigma) {
    SplitMix64 g(derive_seed(seed, a, b));
    const double u1 = 1.0 - g.next_double();
    const double u2 = g.next_double();
    return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace ehrp
