#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace permfield {

/// Mixes a list of 64-bit words into a single seed (splitmix64 finalizer chain).
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> words);

/// Seeded random stream. Streams are split deterministically by index, so a
/// task's randomness depends only on (master seed, task path), never on
/// scheduling.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed);

    std::uint64_t seed() const { return seed_; }

    /// Independent child stream for task `index`.
    RandomStream split(std::uint64_t index) const;

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Uniform double in (0, 1).
    double uniform_open();

    /// Uniform integer in [lo, hi] (inclusive).
    std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);

    double normal();

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

} // namespace permfield
