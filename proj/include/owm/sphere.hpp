#pragma once

// Exact finite-n hypersphere quantities behind the false-positive analysis.
// All results are in the log domain so n can reach 1e5 and beyond.

#include "owm/model.hpp"

namespace owm::sphere {

/// ln A_n(θ): surface area of the cap of half-angle θ on the unit sphere in R^n.
///
/// A_n(θ) = (n-1) π^{(n-1)/2} / Γ((n+1)/2) · ∫_0^θ sin^{n-2}φ dφ.
/// Returns -inf for θ = 0. Throws ParameterError for n < 2 or θ outside [0, π].
double cap_area_log(int n, double theta);

/// ln ∫_0^θ sin^m φ dφ for m >= 0, θ in (0, π].
///
/// The integrand is rescaled by its maximum on [0, θ] before adaptive
/// Gauss-Kronrod quadrature (relative tolerance 1e-10), and the rescaling is
/// added back in the log domain.
double log_sine_power_integral(int m, double theta);

/// ln P_fp = ln(2 A_n(β) / A_n(π)) for the two-hypercone detector; always <= 0.
double exact_fp_probability_log(int n, const DetectionGeometry& geometry);

/// Density of Ψ = arcsin(<X,u>/(‖X‖‖u‖)) for isotropic X in R^n:
/// Γ(n/2) / (sqrt(π) Γ((n-1)/2)) · cos^{n-2}α on [-π/2, π/2].
double angle_pdf(int n, double alpha);

}  // namespace owm::sphere
