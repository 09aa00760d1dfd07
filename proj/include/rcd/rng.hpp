#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

#include "rcd/error.hpp"

namespace rcd {

// splitmix64 finalizer; the core scrambler behind every stream in the project.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Substream derivation: all randomness flows from one master seed; purpose
// tags and indices are hashed in so disjoint substreams never collide.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix64(master ^ mix64(h));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    return mix64(master ^ mix64(index + 0x9e3779b97f4a7c15ULL));
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return derive_seed(derive_seed(master, a), b);
}

// Counter-based generator (splitmix64). State advances by a fixed increment,
// so substreams seeded via derive_seed are independent and the whole thing is
// reproducible bit-for-bit across platforms.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform on (0, 1]; never returns 0 so log() and strictly-positive
    // supports stay safe.
    double next_unit() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    // Uniform integer in [0, n).
    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    bool bernoulli(double p) { return next_unit() <= p; }

    // Box-Muller; two uniforms per draw, no cached spare.
    double normal() {
        double u1 = next_unit();
        double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double lognormal_median(double median, double sigma) {
        if (sigma <= 0.0) return median;
        return median * std::exp(sigma * normal());
    }

    // Beta(mean*k, (1-mean)*k). k <= 0 degenerates to a point mass at the
    // mean, which gives configs a way to request noise-free scores.
    double beta_mean(double mean, double concentration) {
        if (mean <= 0.0) return 0.0;
        if (mean >= 1.0) return 1.0;
        if (concentration <= 0.0) return mean;
        double a = gamma_draw(mean * concentration);
        double b = gamma_draw((1.0 - mean) * concentration);
        double s = a + b;
        if (s <= 0.0) return mean;
        return a / s;
    }

    // Marsaglia-Tsang; shape < 1 boosted through G(a) = G(a+1) * U^(1/a).
    double gamma_draw(double shape) {
        if (shape <= 0.0) throw ValidationError("gamma_draw: shape must be > 0");
        if (shape < 1.0) {
            double u = next_unit();
            return gamma_draw(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / (3.0 * std::sqrt(d));
        for (;;) {
            double x = normal();
            double v = 1.0 + c * x;
            if (v <= 0.0) continue;
            v = v * v * v;
            double u = next_unit();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

private:
    std::uint64_t state_;
};

} // namespace rcd
