#pragma once

// Deterministic counter-based random streams for reproducible Monte Carlo.
//
// Each (seed, counter) pair opens an independent substream, so trial k's
// draws depend only on the master seed and k: trials can run in any order
// or in parallel, and a longer run shares its prefix with a shorter one.

#include <cmath>
#include <cstdint>

namespace pooltactics {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t state) : state_(state) {}

    /// Substream for one trial: the master seed and the counter are hashed
    /// together so streams start at unrelated points of the state space.
    static SplitMix64 stream(std::uint64_t seed, std::uint64_t counter) {
        return SplitMix64(mix(seed ^ mix(counter + 0x9E3779B97F4A7C15ull)));
    }

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Exponential waiting time with the given rate (mean 1/rate).
    double exponential(double rate) {
        return -std::log1p(-uniform()) / rate;
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

} // namespace pooltactics
