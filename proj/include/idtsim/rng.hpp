#pragma once

#include <cmath>
#include <cstdint>

#include "idtsim/core.hpp"

namespace idtsim {

namespace detail {

// SplitMix64 finalizer. Bijective on 64-bit words with full avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Murmur3-style avalanche with distinct constants, used only for deriving
// substream keys so the key chain and the output chain never share a mixer.
inline std::uint64_t mix64_alt(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    return z ^ (z >> 33);
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace detail

// Deterministic, splittable random stream. A stream is identified by a key
// derived from the master seed and the path of substream indices; draws are
// counter-based, so identical (seed, path) always reproduces the same
// sequence. Substreams derived via substream(i) are decorrelated by the key
// mixing and may be consumed concurrently.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed)
        : key_(detail::mix64(seed + detail::kGolden)), counter_(0) {}

    // Child stream addressed by index; independent of draws made so far.
    RngStream substream(std::uint64_t index) const {
        RngStream child(*this);
        child.key_ = detail::mix64_alt(key_ ^ detail::mix64(index * detail::kGolden + 0x5851f42d4c957f2dULL));
        child.counter_ = 0;
        return child;
    }

    std::uint64_t next_u64() {
        ++counter_;
        return detail::mix64(key_ + counter_ * detail::kGolden);
    }

    // Uniform on the open interval (0,1); both endpoints are unreachable.
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    // Unit exponential.
    double exponential() { return -std::log(uniform()); }

    // Standard normal via Box-Muller (two uniforms per call, no cached state).
    double normal() {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // Uniform integer on {0, ..., n-1} by rejection (exact, unbiased).
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
        for (;;) {
            const std::uint64_t x = next_u64();
            if (x < limit) return x % n;
        }
    }

    // Gamma(shape, 1) via Marsaglia-Tsang; shapes below one use the boost
    // G(a) = G(a+1) * U^(1/a).
    double gamma(double shape) {
        if (shape < 1.0) {
            const double u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    // Poisson(lambda). Knuth product method for small means, Hormann's
    // transformed rejection (PTRS) otherwise; both are exact.
    std::uint64_t poisson(double lambda) {
        if (lambda <= 0.0) return 0;
        if (lambda < 10.0) {
            const double threshold = std::exp(-lambda);
            std::uint64_t k = 0;
            double prod = uniform();
            while (prod > threshold) {
                ++k;
                prod *= uniform();
            }
            return k;
        }
        const double slam = std::sqrt(lambda);
        const double loglam = std::log(lambda);
        const double b = 0.931 + 2.53 * slam;
        const double a = -0.059 + 0.02483 * b;
        const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
        const double v_r = 0.9277 - 3.6224 / (b - 2.0);
        for (;;) {
            double u = uniform() - 0.5;
            const double v = uniform();
            const double us = 0.5 - std::abs(u);
            const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
            if (kf < 0.0) continue;
            if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(kf);
            if (us < 0.013 && v > us) continue;
            if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
                kf * loglam - lambda - std::lgamma(kf + 1.0)) {
                return static_cast<std::uint64_t>(kf);
            }
        }
    }

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

}  // namespace idtsim
