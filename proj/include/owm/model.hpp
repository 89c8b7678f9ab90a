#pragma once

// Core domain types shared by every module: system parameters, the
// hypercone detection geometry, the ±1 watermark key, and the
// Gram-Schmidt plane coordinates of an embedding displacement.

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace owm {

/// Raised for invalid arguments (non-finite values, bad ranges, length mismatches).
class ParameterError : public std::invalid_argument {
public:
    explicit ParameterError(const std::string& what) : std::invalid_argument(what) {}
};

/// Host/attack/distortion/false-positive-exponent tuple.
///
/// Construct through make() so that invariants are checked once; all
/// downstream code assumes a validated instance.
struct SystemParams {
    double host_variance = 1.0;      ///< σ_X² > 0
    double attack_variance = 0.0;    ///< σ_Z² ≥ 0
    double distortion = 1.0;         ///< D > 0, per dimension
    double fp_exponent = 0.1;        ///< λ > 0, nats

    static SystemParams make(double host_variance, double attack_variance,
                             double distortion, double fp_exponent);
    void validate() const;
};

/// Detection region half-angle and the matching correlation threshold.
struct DetectionGeometry {
    double fp_exponent = 0.0;    ///< λ the geometry was derived from
    double beta = 0.0;           ///< arcsin(e^{-λ})
    double cos2_beta = 0.0;      ///< 1 - e^{-2λ}
    double sin2_beta = 0.0;      ///< e^{-2λ}
    double corr_threshold = 0.0; ///< sqrt(1 - e^{-2λ}) = cos β

    double tan2_beta() const { return sin2_beta / cos2_beta; }
};

DetectionGeometry derive_geometry(double fp_exponent);

/// ±1 watermark of length n. values[i]² == 1 for every i.
class WatermarkSequence {
public:
    WatermarkSequence() = default;

    /// Takes ownership of explicit values; each must be exactly +1 or -1.
    static WatermarkSequence from_values(std::vector<double> values, std::uint64_t seed = 0);

    std::size_t size() const { return values_.size(); }
    std::uint64_t seed() const { return seed_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    WatermarkSequence negated() const;

private:
    std::vector<double> values_;
    std::uint64_t seed_ = 0;
};

/// Deterministic key generation.
///
/// Component i is +1 when bit (i mod 64) of word (i / 64) of a
/// std::mt19937_64 stream seeded with `seed` is set, -1 otherwise.
/// mt19937_64 is fully specified by the C++ standard, so sequences are
/// identical across platforms and standard libraries.
WatermarkSequence generate_watermark(std::size_t n, std::uint64_t seed);

/// Fills `out` (size n) with the same ±1 sequence without allocating.
void fill_watermark(std::span<double> out, std::uint64_t seed);

struct HostSignal {
    std::vector<double> samples;

    std::size_t size() const { return samples.size(); }
};

/// Per-dimension geometry of a host/displacement pair relative to u.
struct PlaneCoordinates {
    double r = 0.0;      ///< ‖x‖²/n
    double alpha = 0.0;  ///< arcsin(<x,u>/(‖x‖‖u‖)), 0 when x = 0
    double v1 = 0.0;     ///< displacement along u/‖u‖, scaled by 1/sqrt(n)
    double v2 = 0.0;     ///< along the part of x orthogonal to u
    double v3 = 0.0;     ///< remaining component, >= 0 by orientation
};

/// Orthonormal triple from Gram-Schmidt on (u, x, w).
///
/// e1 = u/‖u‖; e2 completes span{u, x} with <x, e2> >= 0; e3 carries the part
/// of w outside that plane, oriented so the v3 coordinate is non-negative.
/// Degenerate directions (x parallel to u, w inside the plane) are filled by
/// orthogonalising the first standard basis vector that survives projection,
/// so the frame is always complete and deterministic.
class PlaneFrame {
public:
    PlaneFrame(std::span<const double> x, const WatermarkSequence& u, std::span<const double> w);

    const PlaneCoordinates& coordinates() const { return coords_; }
    std::span<const double> axis(int k) const { return axes_.at(k); }

    /// sqrt(n) * (v1 e1 + v2 e2 + v3 e3).
    std::vector<double> reconstruct(double v1, double v2, double v3) const;

private:
    std::array<std::vector<double>, 3> axes_;
    PlaneCoordinates coords_;
};

PlaneCoordinates to_plane_coordinates(const HostSignal& x, const WatermarkSequence& u,
                                      std::span<const double> w);

// Small dense helpers reused across modules; accumulate in long double.
double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);

}  // namespace owm
