#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mfpca {

// SplitMix64 finalizer. All randomness in this library flows through this one
// mixing function, so streams are reproducible from (seed, stream) alone.
// Algorithm and test vectors are documented in docs/rng.md.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// SplitMix64 counter generator: output k is mix of state0 + k*gamma.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    // Independent stream derived from (seed, stream); see docs/rng.md.
    SplitMix64(std::uint64_t seed, std::uint64_t stream)
        : state_(mix64(seed) ^ mix64(stream ^ 0x6A09E667F3BCC909ull)) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Uniform on [0, 1): top 53 bits scaled by 2^-53.
    double next_uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double next_open01() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    // Standard normal via Box-Muller (two draws per call, no cached state).
    double next_gaussian() {
        const double u1 = next_open01();
        const double u2 = next_uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t state() const { return state_; }

private:
    std::uint64_t state_;
};

}  // namespace mfpca
