#pragma once

// Embedding rules: the universal optimum embedder (displacement confined to
// span{x, u}, host partially cancelled, the rest of the budget along ±u) and
// the sign-embedder baseline y = x + sign(<x,u>) sqrt(D) u.
//
// Neither rule ever sees σ_X² or σ_Z²; only D, the detection geometry and
// the host itself.

#include "owm/model.hpp"

#include <span>
#include <vector>

namespace owm {

enum class EmbedBranch {
    optimal,            ///< D >= r cos⁴β: stationary point of T1 is feasible
    degenerate_shrink,  ///< D < r cos⁴β: whole budget spent against the host
    sign,               ///< sign-embedder baseline
};

const char* to_string(EmbedBranch branch);

/// Displacement coordinates (per-dimension, Gram-Schmidt frame of u, x).
struct Displacement {
    double v1 = 0.0;
    double v2 = 0.0;
    double v3 = 0.0;
    EmbedBranch branch = EmbedBranch::optimal;
};

/// Optimum displacement for a host with r = ‖x‖²/n at angle α to u.
///
/// Optimal branch: v = (±sqrt(D - r cos⁴β), -sqrt(r) cos²β, 0), with the
/// sign of v1 following sin α (+ at α = 0). Degenerate branch: v = (0, -sqrt(D), 0).
Displacement optimal_displacement(double r, double alpha, double distortion,
                                  const DetectionGeometry& geometry);

struct EmbedResult {
    std::vector<double> y;
    PlaneCoordinates coords;  ///< r, α of x; v of w = y - x
    /// y = a x + b u. NaN when the displacement leaves span{x, u}, which only
    /// happens for hosts exactly parallel to u.
    double a = 0.0;
    double b = 0.0;
    double distortion_used = 0.0;  ///< ‖y - x‖² / n
    EmbedBranch branch = EmbedBranch::optimal;
};

/// Coefficient-level form of the optimum rule from the sufficient statistics
/// <x,u>, ‖x‖² and n. `in_plane` is false when x is within about 1e-3 rad of
/// ±u: the component of x orthogonal to u is then too poorly determined by
/// these scalars, and embed_optimal switches to the explicit frame.
struct EmbedCoefficients {
    double a = 1.0;
    double b = 0.0;
    PlaneCoordinates coords;
    EmbedBranch branch = EmbedBranch::optimal;
    bool in_plane = true;
};

EmbedCoefficients optimal_coefficients(double x_dot_u, double x_norm2, std::size_t n,
                                       double distortion, const DetectionGeometry& geometry);

EmbedResult embed_optimal(const HostSignal& x, const WatermarkSequence& u, double distortion,
                          const DetectionGeometry& geometry);

EmbedResult embed_sign(const HostSignal& x, const WatermarkSequence& u, double distortion);

/// T1 = (sqrt(r) sin α + v1)² (1/cos²β - 1) - (sqrt(r) cos α + v2)² - v3².
double embedding_t1(const PlaneCoordinates& coords, const DetectionGeometry& geometry);

}  // namespace owm
