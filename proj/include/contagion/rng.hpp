#pragma once

#include <cstdint>

namespace contagion {

/// SplitMix64 finalizer; used for seed derivation.
std::uint64_t mix64(std::uint64_t x);

/// Named sub-streams drawn from one episode seed. Each consumer owns its stream,
/// so extra draws in one never shift another.
enum class Stream : std::uint64_t {
    placement = 1,
    human_movement = 2,
    transitions = 3,
    policy = 4,
    bootstrap = 5,
};

/// xoshiro256** generator. All distributions are implemented here rather than with
/// <random> distributions, whose output is implementation-defined; this keeps replay
/// bit-exact across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0);
    Rng(std::uint64_t seed, Stream stream);

    std::uint64_t next_u64();

    /// Uniform on [0, 1) with 53 bits of resolution.
    double uniform01();
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n); n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n);
    /// Box-Muller; one normal per call.
    double normal(double mean, double stddev);
    bool bernoulli(double p);

    friend bool operator==(const Rng&, const Rng&) = default;

private:
    std::uint64_t s_[4];
};

/// Seed for episode `episode` of run seed `seed`.
std::uint64_t episode_seed(std::uint64_t seed, std::uint64_t episode);

}  // namespace contagion
