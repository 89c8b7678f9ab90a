#pragma once

// False-negative error exponents of the optimum embedder/detector pair.
//
// Closed forms for the Gaussian-attack and attack-free cases, the
// positivity thresholds in λ, and a brute-force oracle that minimises the
// saddle-point objective directly (golden section in r, or grid scans over
// (r, q) and (r, α)) without using any of the closed forms.

#include "owm/embedder.hpp"
#include "owm/model.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace owm {

enum class ExponentMethod { closed_form, attack_free, numeric_oracle };
enum class ZeroReason { global_min_feasible, insufficient_distortion };

const char* to_string(ExponentMethod method);
const char* to_string(ZeroReason reason);

struct ExponentReport {
    double e_fn = 0.0;    ///< nats per dimension
    double r_star = 0.0;  ///< minimising host energy per dimension
    double q_star = 0.0;  ///< minimising residual noise energy per dimension
    ExponentMethod method = ExponentMethod::closed_form;
    std::optional<ZeroReason> zero_reason;
};

/// Numeric oracle gave up (iteration cap hit before the bracket shrank to tol).
class OracleError : public std::runtime_error {
public:
    explicit OracleError(const std::string& what) : std::runtime_error(what) {}
};

/// ½ (t - ln t - 1): Gaussian divergence per dimension for a variance ratio t > 0.
double variance_divergence(double ratio);

/// T1 along the optimum embedder's α = 0 slice: D tan²β - r sin²β.
double boundary_t1(double r, double distortion, const DetectionGeometry& geometry);

/// Objective ½φ(q/σ_Z²) + ½φ(r/σ_X²) with φ(t) = t - ln t - 1.
double saddle_objective(double r, double q, const SystemParams& params);

/// Saddle objective already minimised over q >= max(0, T1(r)); convex in r.
double reduced_objective(double r, const SystemParams& params, const DetectionGeometry& geometry);

/// Closed-form exponent for σ_Z² > 0 (σ_Z² = 0 is forwarded to efn_attack_free).
///
/// Returns 0 with zero_reason global_min_feasible when (σ_X², σ_Z²) already
/// satisfies q >= T1(r). Within relative 1e-8 of the singular point
/// σ_Z² = σ_X² sin²β the result comes from the numeric oracle instead.
ExponentReport efn_closed_form(const SystemParams& params);

ExponentReport efn_attack_free(double distortion, double host_variance, double fp_exponent);

struct PositivityThresholds {
    double lambda1 = 0.0;  ///< optimum embedder; +inf when D >= σ_X²
    double lambda2 = 0.0;  ///< sign embedder
};

PositivityThresholds positivity_thresholds(double distortion, double host_variance);

/// Golden-section minimisation of reduced_objective over r.
/// Requires σ_Z² > 0 and tol in (0, 1e-3]. Throws OracleError after max_iterations.
ExponentReport efn_numeric_oracle(const SystemParams& params, double tol = 1e-10,
                                  int max_iterations = 200);

enum class Execution { serial, parallel };

struct GridMinimum {
    double value = 0.0;
    double r = 0.0;
    double q = 0.0;      ///< minimising q (2-D and 3-D modes)
    double alpha = 0.0;  ///< minimising α (3-D and fixed-v modes)
};

struct GridShape {
    int r_points = 400;
    int second_points = 400;  ///< q points (2-D) or α points (3-D)
};

/// Brute-force scan of the saddle objective over feasible (r, q) grid points.
GridMinimum efn_grid_rq(const SystemParams& params, GridShape shape,
                        Execution execution = Execution::parallel);

/// Scan over (r, α) with v tied to (r, α) by optimal_displacement and the
/// -ln cos α term included; q is minimised in closed form per point.
/// The α grid is symmetric with an odd number of points, so α = 0 is on it.
GridMinimum efn_grid_r_alpha(const SystemParams& params, GridShape shape,
                             Execution execution = Execution::parallel);

/// Same scan with a fixed displacement v instead of the optimum rule.
GridMinimum efn_grid_fixed_displacement(const SystemParams& params, const Displacement& v,
                                        GridShape shape,
                                        Execution execution = Execution::parallel);

/// Parameter grid used by `validate` and the acceptance suite:
/// λ ∈ {0.1, 0.3, 0.6, 1.0}, σ_Z² ∈ {0.1, 0.5, 1, 2}, D ∈ {0.5, 1, 2}, σ_X² = 1.
std::vector<SystemParams> validation_grid();

struct OracleComparison {
    double max_abs_diff = 0.0;
    SystemParams worst;
    std::size_t points = 0;
    std::size_t zero_points = 0;
};

OracleComparison compare_with_oracle(const std::vector<SystemParams>& grid, double tol = 1e-10);

}  // namespace owm
