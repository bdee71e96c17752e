// SPDX-License-Identifier: Apache-2.0
// Copyright (c) 2026 the linkmix authors

#pragma once

#include <cmath>
#include <cstdint>

#include "linkmix/errors.hpp"

namespace linkmix::rng {

/// SplitMix64 as the per-stream engine. Stream i of a seed is keyed through
/// two mixing rounds, so (seed, i) -> state is effectively a counter-based
/// construction: any partitioning of work into streams draws the same values.
class SplitMix64 {
  public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    /// full-avalanche finalizer (the SplitMix64 output stage)
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Stream states must not sit on the generator's own increment lattice,
    /// or streams become shifted copies of each other. Mixing seed and index
    /// separately places the states pseudo-randomly.
    static SplitMix64 stream(std::uint64_t seed, std::uint64_t stream_index) {
        const std::uint64_t a = mix(seed + 0x9E3779B97F4A7C15ULL);
        const std::uint64_t b = mix(stream_index * 0xD1342543DE82EF95ULL + 0x632BE59BD9B4E019ULL);
        return SplitMix64(a ^ b);
    }

    std::uint64_t operator()() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// uniform in (0, 1), 53-bit resolution, never exactly 0
    double uniform() {
        const double u = static_cast<double>((*this)() >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }

    /// standard normal via Marsaglia polar rejection
    double normal() {
        while (true) {
            const double x = 2.0 * uniform() - 1.0;
            const double y = 2.0 * uniform() - 1.0;
            const double r2 = x * x + y * y;
            if (r2 > 0.0 && r2 < 1.0) return x * std::sqrt(-2.0 * std::log(r2) / r2);
        }
    }

    /// gamma variate with the given shape and unit scale (Marsaglia-Tsang)
    double gamma(double shape) {
        if (!(shape > 0.0)) throw DomainError("rng::gamma: shape must be > 0");
        if (shape < 1.0) {
            return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        while (true) {
            const double x = normal();
            const double t = 1.0 + c * x;
            if (t <= 0.0) continue;
            const double v = t * t * t;
            const double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    /// Poisson variate; product-of-uniforms run in the log domain, O(lambda)
    int poisson(double lambda) {
        if (!(lambda >= 0.0)) throw DomainError("rng::poisson: lambda must be >= 0");
        if (lambda == 0.0) return 0;
        double acc = 0.0;
        int k = 0;
        while (true) {
            acc += -std::log(uniform());
            if (acc >= lambda) return k;
            ++k;
        }
    }

  private:
    std::uint64_t state_;
};

}  // namespace linkmix::rng
