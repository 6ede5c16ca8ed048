#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace qta {

// Seed for one task of a seeded computation. Every randomized operation in
// the library consumes an RngSeed, never a bare integer, so ensemble runs
// stay reproducible regardless of execution order or thread count.
struct RngSeed {
    std::uint64_t master = 0;
    std::uint64_t task_index = 0;
};

// SplitMix64 output mixing function (Vigna's finalizer).
constexpr std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Task seed = splitmix64_mix(master XOR taskIndex). Fixed so that
// independently written harnesses agree on task structure.
constexpr std::uint64_t derive_task_seed(RngSeed seed) {
    return splitmix64_mix(seed.master ^ seed.task_index);
}

// xoshiro256** seeded through a SplitMix64 stream. Uniform and normal
// variates are generated with fixed bit-level recipes (53-bit mantissa
// uniforms, Box-Muller normals) so that output bytes do not depend on the
// C++ standard library in use.
class Xoshiro256ss {
public:
    explicit Xoshiro256ss(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto& word : state_) {
            sm += 0x9E3779B97F4A7C15ULL;
            word = splitmix64_mix(sm);
        }
    }

    explicit Xoshiro256ss(RngSeed seed) : Xoshiro256ss(derive_task_seed(seed)) {}

    std::uint64_t next() {
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

    // Uniform in [0, 1), 53 random mantissa bits.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Standard normal. Draws a full Box-Muller pair and keeps the cosine
    // branch; no state is cached across calls.
    double normal() {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    // Complex with independent N(0,1) real and imaginary parts; uses one
    // Box-Muller pair per call.
    std::complex<double> complex_normal() {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

} // namespace qta
