#pragma once

// Reproducible random streams for the Monte Carlo harness.
//
// Every trial owns its own streams, seeded from (master seed, trial index,
// stream id) through the splitmix64 finaliser, so results never depend on
// scheduling. Uniforms come from std::mt19937_64 (bit-exact across standard
// libraries); normals use the basic Box-Muller transform below rather
// than std::normal_distribution, whose algorithm is implementation-defined.

#include <cstdint>
#include <random>
#include <span>

namespace owm {

/// splitmix64 output function applied to `x`.
std::uint64_t mix64(std::uint64_t x);

/// Seed for stream `stream` of item `index` under `master`.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, std::uint64_t stream = 0);

class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on (0, 1]: 53 random bits, offset by one ulp-step so log() is finite.
    double uniform_open_closed();
    /// Uniform on [0, 1).
    double uniform();

    /// Standard normal. Box-Muller: with U1 in (0,1], U2 in [0,1),
    /// R = sqrt(-2 ln U1), Z0 = R cos(2πU2), Z1 = R sin(2πU2); Z0 is returned
    /// first and Z1 cached for the next call.
    double normal();

    /// Fills `out` with N(0, variance) draws.
    void fill_normal(std::span<double> out, double variance);

private:
    std::mt19937_64 engine_;
    double cached_ = 0.0;
    bool has_cached_ = false;
};

}  // namespace owm
