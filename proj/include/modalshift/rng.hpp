#pragma once

#include <cmath>
#include <cstdint>

namespace modalshift {

/// SplitMix64 finalizer. Bijective on 64-bit words; used both to expand a
/// seed into generator state and to combine seed components into stream
/// seeds. The exact constants are the reference ones, so seed derivation
/// is reproducible across builds and platforms.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for an independent child stream, keyed by up to two indices.
/// derive_seed(master, a, b) = mix64(mix64(mix64(master) ^ a) ^ b).
inline constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                           std::uint64_t b = 0) noexcept {
    return mix64(mix64(mix64(master) ^ a) ^ b);
}

/// Deterministic 64-bit random generator (xoshiro256**), seeded through
/// SplitMix64. Identical seeds give identical sequences on every platform;
/// all distribution sampling is implemented here rather than delegated to
/// <random>, whose distributions are not bit-portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0) noexcept {
        std::uint64_t z = seed;
        for (auto& word : state_) {
            z = mix64(z);
            word = z;
        }
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 bits of precision.
    double next_double() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) noexcept {
        return lo + (hi - lo) * next_double();
    }

    /// Uniform integer in [0, n). n must be >= 1.
    std::uint64_t uniform_index(std::uint64_t n) noexcept {
        // Multiply-shift; bias is negligible for the n used here (< 2^32).
        return static_cast<std::uint64_t>(next_double() * static_cast<double>(n)) % n;
    }

    bool bernoulli(double p) noexcept {
        return next_double() < p;
    }

    /// Poisson sample. Exponential-product inversion for small means,
    /// Hormann's PTRS transformed rejection for large ones.
    std::uint64_t poisson(double lambda) noexcept {
        if (lambda <= 0.0)
            return 0;
        if (lambda <= 30.0)
            return poisson_product(lambda);
        return poisson_ptrs(lambda);
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t poisson_product(double lambda) noexcept {
        const double limit = std::exp(-lambda);
        std::uint64_t k = 0;
        double product = next_double();
        while (product > limit) {
            ++k;
            product *= next_double();
        }
        return k;
    }

    std::uint64_t poisson_ptrs(double lambda) noexcept {
        const double log_lambda = std::log(lambda);
        const double b = 0.931 + 2.53 * std::sqrt(lambda);
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            const double u = next_double() - 0.5;
            const double v = next_double();
            const double us = 0.5 - std::abs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
            if (us >= 0.07 && v <= v_r)
                return static_cast<std::uint64_t>(kf);
            if (kf < 0.0 || (us < 0.013 && v > us))
                continue;
            if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
                kf * log_lambda - lambda - std::lgamma(kf + 1.0))
                return static_cast<std::uint64_t>(kf);
        }
    }

    std::uint64_t state_[4];
};

} // namespace modalshift
