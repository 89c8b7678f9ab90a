#include "owm/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace owm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Relative distance to σ_Z² = σ_X² sin²β inside which the closed form is bypassed.
constexpr double kSingularBand = 1e-8;

// r range scanned by the grids: comfortably past both σ_X² and D / cos²β.
double r_upper_bound(const SystemParams& p, const DetectionGeometry& g) {
    return 2.0 * std::max(p.host_variance, p.distortion / g.cos2_beta);
}

// Best grid point; ties keep the first in row-major order so the serial and
// parallel scans agree exactly.
template <class Eval>
GridMinimum scan_grid(int rows, int cols, Eval eval, Execution execution) {
    if (rows < 1 || cols < 1) throw ParameterError("grid needs at least one point per axis");
    std::vector<GridMinimum> row_best(static_cast<std::size_t>(rows));
    auto scan_row = [&](int i) {
        GridMinimum best;
        best.value = kInf;
        for (int j = 0; j < cols; ++j) {
            const GridMinimum candidate = eval(i, j);
            if (candidate.value < best.value) best = candidate;
        }
        row_best[static_cast<std::size_t>(i)] = best;
    };
    if (execution == Execution::parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < rows; ++i) scan_row(i);
    } else {
        for (int i = 0; i < rows; ++i) scan_row(i);
    }
    GridMinimum best;
    best.value = kInf;
    for (const auto& candidate : row_best)
        if (candidate.value < best.value) best = candidate;
    return best;
}

double alpha_node(int k, int points) {
    if (points == 1) return 0.0;
    const double limit = 0.999 * std::numbers::pi / 2;
    return limit * static_cast<double>(2 * k - (points - 1)) / static_cast<double>(points - 1);
}

void require_attack(const SystemParams& p, const char* who) {
    if (!(p.attack_variance > 0.0)) {
        std::ostringstream os;
        os << who << " needs attack variance > 0 (use the attack-free exponent)";
        throw ParameterError(os.str());
    }
}

GridMinimum angle_point(const SystemParams& p, const DetectionGeometry& g, double r, double alpha,
                        const Displacement& v) {
    const PlaneCoordinates coords{r, alpha, v.v1, v.v2, v.v3};
    const double q = std::max(p.attack_variance, embedding_t1(coords, g));
    GridMinimum point;
    point.r = r;
    point.q = q;
    point.alpha = alpha;
    point.value = saddle_objective(r, q, p) - std::log(std::cos(alpha));
    return point;
}

}  // namespace

const char* to_string(ExponentMethod method) {
    switch (method) {
        case ExponentMethod::closed_form: return "closed-form";
        case ExponentMethod::attack_free: return "attack-free";
        case ExponentMethod::numeric_oracle: return "numeric-oracle";
    }
    return "unknown";
}

const char* to_string(ZeroReason reason) {
    switch (reason) {
        case ZeroReason::global_min_feasible: return "global-min-feasible";
        case ZeroReason::insufficient_distortion: return "insufficient-distortion";
    }
    return "unknown";
}

double variance_divergence(double ratio) {
    if (!(ratio > 0.0)) return kInf;
    const double delta = ratio - 1.0;
    return 0.5 * (delta - std::log1p(delta));
}

double boundary_t1(double r, double distortion, const DetectionGeometry& g) {
    return distortion * g.tan2_beta() - r * g.sin2_beta;
}

double saddle_objective(double r, double q, const SystemParams& p) {
    return variance_divergence(q / p.attack_variance) + variance_divergence(r / p.host_variance);
}

double reduced_objective(double r, const SystemParams& p, const DetectionGeometry& g) {
    if (!(r > 0.0)) return kInf;
    // φ is minimised at ratio 1, so the best admissible q is max(σ_Z², T1(r)).
    const double q = std::max(p.attack_variance, boundary_t1(r, p.distortion, g));
    return saddle_objective(r, q, p);
}

ExponentReport efn_attack_free(double distortion, double host_variance, double fp_exponent) {
    SystemParams::make(host_variance, 0.0, distortion, fp_exponent);
    const DetectionGeometry g = derive_geometry(fp_exponent);
    ExponentReport report;
    report.method = ExponentMethod::attack_free;
    report.r_star = distortion / g.cos2_beta;
    report.q_star = 0.0;
    if (report.r_star <= host_variance) {
        report.e_fn = 0.0;
        report.zero_reason = ZeroReason::insufficient_distortion;
    } else {
        report.e_fn = variance_divergence(report.r_star / host_variance);
    }
    return report;
}

ExponentReport efn_closed_form(const SystemParams& p) {
    p.validate();
    if (p.attack_variance == 0.0)
        return efn_attack_free(p.distortion, p.host_variance, p.fp_exponent);

    const DetectionGeometry g = derive_geometry(p.fp_exponent);
    const double sx2 = p.host_variance;
    const double sz2 = p.attack_variance;
    const double d = p.distortion;
    const double c = g.cos2_beta;
    const double s = g.sin2_beta;

    ExponentReport report;
    report.method = ExponentMethod::closed_form;
    if (boundary_t1(sx2, d, g) <= sz2) {
        report.e_fn = 0.0;
        report.r_star = sx2;
        report.q_star = sz2;
        report.zero_reason = ZeroReason::global_min_feasible;
        return report;
    }

    const double gap = sz2 - sx2 * s;
    if (std::abs(gap) <= kSingularBand * std::max(sz2, sx2 * s)) return efn_numeric_oracle(p);

    // Stationary point of the boundary objective: root of
    //   A r² - B r + C = 0,  A = c(σ_Z² - σ_X² s),  B = 2cσ_X²σ_Z² + D(σ_Z² - σ_X² s),
    //   C = Dσ_X²σ_Z²,
    // taking the smaller-magnitude branch (the one inside (0, D/c)). The two
    // algebraically equal forms are picked by the sign of B to avoid cancellation.
    const double pp = d * gap;
    const double qq = 2.0 * c * sx2 * sz2;
    const double b = pp + qq;
    const double root = std::hypot(pp, qq);
    const double r = b >= 0.0 ? 2.0 * d * sx2 * sz2 / (b + root) : (b - root) / (2.0 * c * gap);

    report.r_star = r;
    report.q_star = boundary_t1(r, d, g);
    report.e_fn = saddle_objective(report.r_star, report.q_star, p);
    return report;
}

PositivityThresholds positivity_thresholds(double distortion, double host_variance) {
    if (!(distortion > 0.0) || !(host_variance > 0.0) || !std::isfinite(distortion) ||
        !std::isfinite(host_variance))
        throw ParameterError("distortion and host variance must be finite and > 0");
    const double ratio = distortion / host_variance;
    PositivityThresholds t;
    t.lambda1 = ratio < 1.0 ? -0.5 * std::log1p(-ratio) : kInf;
    t.lambda2 = 0.5 * std::log1p(ratio);
    return t;
}

ExponentReport efn_numeric_oracle(const SystemParams& p, double tol, int max_iterations) {
    p.validate();
    require_attack(p, "numeric oracle");
    if (!(tol > 0.0) || tol > 1e-3) throw ParameterError("oracle tolerance must be in (0, 1e-3]");
    const DetectionGeometry g = derive_geometry(p.fp_exponent);

    ExponentReport report;
    report.method = ExponentMethod::numeric_oracle;
    if (boundary_t1(p.host_variance, p.distortion, g) <= p.attack_variance) {
        report.r_star = p.host_variance;
        report.q_star = p.attack_variance;
        report.zero_reason = ZeroReason::global_min_feasible;
        return report;
    }

    auto f = [&](double r) { return reduced_objective(r, p, g); };
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0;
    double hi = r_upper_bound(p, g);
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    int iterations = 0;
    while (hi - lo > tol) {
        if (++iterations > max_iterations) {
            std::ostringstream os;
            os << "golden section did not reach tolerance " << tol << " within " << max_iterations
               << " iterations (bracket [" << lo << ", " << hi << "])";
            throw OracleError(os.str());
        }
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    double r = mid;
    double value = f_mid;
    if (f1 < value) { r = x1; value = f1; }
    if (f2 < value) { r = x2; value = f2; }

    report.r_star = r;
    report.q_star = std::max(p.attack_variance, boundary_t1(r, p.distortion, g));
    report.e_fn = value;
    return report;
}

GridMinimum efn_grid_rq(const SystemParams& p, GridShape shape, Execution execution) {
    p.validate();
    require_attack(p, "grid oracle");
    const DetectionGeometry g = derive_geometry(p.fp_exponent);
    const double r_max = r_upper_bound(p, g);
    const double q_max = 2.0 * std::max(p.attack_variance, p.distortion * g.tan2_beta());
    auto eval = [&](int i, int j) {
        GridMinimum point;
        point.r = r_max * (i + 1) / shape.r_points;
        point.q = q_max * (j + 1) / shape.second_points;
        point.value = point.q >= std::max(0.0, boundary_t1(point.r, p.distortion, g))
                          ? saddle_objective(point.r, point.q, p)
                          : kInf;
        return point;
    };
    return scan_grid(shape.r_points, shape.second_points, eval, execution);
}

GridMinimum efn_grid_r_alpha(const SystemParams& p, GridShape shape, Execution execution) {
    p.validate();
    require_attack(p, "grid oracle");
    const DetectionGeometry g = derive_geometry(p.fp_exponent);
    const double r_max = r_upper_bound(p, g);
    auto eval = [&](int i, int k) {
        const double r = r_max * (i + 1) / shape.r_points;
        const double alpha = alpha_node(k, shape.second_points);
        return angle_point(p, g, r, alpha, optimal_displacement(r, alpha, p.distortion, g));
    };
    return scan_grid(shape.r_points, shape.second_points, eval, execution);
}

GridMinimum efn_grid_fixed_displacement(const SystemParams& p, const Displacement& v,
                                        GridShape shape, Execution execution) {
    p.validate();
    require_attack(p, "grid oracle");
    const DetectionGeometry g = derive_geometry(p.fp_exponent);
    const double r_max = r_upper_bound(p, g);
    auto eval = [&](int i, int k) {
        const double r = r_max * (i + 1) / shape.r_points;
        return angle_point(p, g, r, alpha_node(k, shape.second_points), v);
    };
    return scan_grid(shape.r_points, shape.second_points, eval, execution);
}

std::vector<SystemParams> validation_grid() {
    std::vector<SystemParams> grid;
    for (double lambda : {0.1, 0.3, 0.6, 1.0})
        for (double sz2 : {0.1, 0.5, 1.0, 2.0})
            for (double d : {0.5, 1.0, 2.0}) grid.push_back(SystemParams::make(1.0, sz2, d, lambda));
    return grid;
}

OracleComparison compare_with_oracle(const std::vector<SystemParams>& grid, double tol) {
    OracleComparison out;
    out.max_abs_diff = -1.0;
    for (const auto& p : grid) {
        const ExponentReport closed = efn_closed_form(p);
        const ExponentReport oracle = efn_numeric_oracle(p, tol);
        const double diff = std::abs(closed.e_fn - oracle.e_fn);
        if (closed.zero_reason) ++out.zero_points;
        ++out.points;
        if (diff > out.max_abs_diff) {
            out.max_abs_diff = diff;
            out.worst = p;
        }
    }
    out.max_abs_diff = std::max(out.max_abs_diff, 0.0);
    return out;
}

}  // namespace owm
