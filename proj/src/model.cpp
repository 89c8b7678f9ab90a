#include "owm/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace owm {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        std::ostringstream os;
        os << name << " must be finite (got " << value << ")";
        throw ParameterError(os.str());
    }
}

// Relative size below which a Gram-Schmidt residual counts as zero.
constexpr double kDegenerateRatio = 1e-12;

void axpy(double a, std::span<const double> x, std::span<double> y) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

// Removes the components of v along the (orthonormal, possibly empty) axes.
// Two passes: classical Gram-Schmidt loses orthogonality otherwise.
void project_out(std::span<double> v, std::span<const std::vector<double>> axes) {
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& e : axes) {
            if (e.empty()) continue;
            axpy(-dot(v, e), e, v);
        }
    }
}

void normalise(std::vector<double>& v) {
    const double norm = std::sqrt(squared_norm(v));
    for (double& value : v) value /= norm;
}

// Deterministic completion of the basis when a direction degenerates.
// Leaves the result empty when the space is exhausted (n < 3).
std::vector<double> complete_axis(std::size_t n, std::span<const std::vector<double>> axes) {
    std::vector<double> best;
    double best_norm = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<double> candidate(n, 0.0);
        candidate[k] = 1.0;
        project_out(candidate, axes);
        const double norm2 = squared_norm(candidate);
        if (norm2 > best_norm) {
            best_norm = norm2;
            best = std::move(candidate);
        }
        if (best_norm > 0.25) break;
    }
    if (best_norm <= 1e-20) return {};
    normalise(best);
    return best;
}

}  // namespace

double dot(std::span<const double> a, std::span<const double> b) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) acc += static_cast<long double>(a[i]) * b[i];
    return static_cast<double>(acc);
}

double squared_norm(std::span<const double> a) {
    long double acc = 0.0L;
    for (double value : a) acc += static_cast<long double>(value) * value;
    return static_cast<double>(acc);
}

SystemParams SystemParams::make(double host_variance, double attack_variance, double distortion,
                                double fp_exponent) {
    SystemParams p{host_variance, attack_variance, distortion, fp_exponent};
    p.validate();
    return p;
}

void SystemParams::validate() const {
    require_finite(host_variance, "host variance");
    require_finite(attack_variance, "attack variance");
    require_finite(distortion, "distortion");
    require_finite(fp_exponent, "false-positive exponent");
    if (host_variance <= 0.0) throw ParameterError("host variance must be > 0");
    if (attack_variance < 0.0) throw ParameterError("attack variance must be >= 0");
    if (distortion <= 0.0) throw ParameterError("distortion must be > 0");
    if (fp_exponent <= 0.0) throw ParameterError("false-positive exponent must be > 0");
}

DetectionGeometry derive_geometry(double fp_exponent) {
    require_finite(fp_exponent, "false-positive exponent");
    if (fp_exponent <= 0.0) throw ParameterError("false-positive exponent must be > 0");

    DetectionGeometry g;
    g.fp_exponent = fp_exponent;
    g.sin2_beta = std::exp(-2.0 * fp_exponent);
    g.cos2_beta = -std::expm1(-2.0 * fp_exponent);
    g.beta = std::asin(std::exp(-fp_exponent));
    g.corr_threshold = std::sqrt(g.cos2_beta);
    return g;
}

WatermarkSequence WatermarkSequence::from_values(std::vector<double> values, std::uint64_t seed) {
    if (values.empty()) throw ParameterError("watermark must have at least one component");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] != 1.0 && values[i] != -1.0) {
            std::ostringstream os;
            os << "watermark component " << i << " is " << values[i] << ", expected +1 or -1";
            throw ParameterError(os.str());
        }
    }
    WatermarkSequence u;
    u.values_ = std::move(values);
    u.seed_ = seed;
    return u;
}

WatermarkSequence WatermarkSequence::negated() const {
    WatermarkSequence u = *this;
    for (double& value : u.values_) value = -value;
    return u;
}

void fill_watermark(std::span<double> out, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::uint64_t word = 0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (i % 64 == 0) word = engine();
        out[i] = ((word >> (i % 64)) & 1U) ? 1.0 : -1.0;
    }
}

WatermarkSequence generate_watermark(std::size_t n, std::uint64_t seed) {
    if (n == 0) throw ParameterError("watermark length must be >= 1");
    std::vector<double> values(n);
    fill_watermark(values, seed);
    return WatermarkSequence::from_values(std::move(values), seed);
}

PlaneFrame::PlaneFrame(std::span<const double> x, const WatermarkSequence& u,
                       std::span<const double> w) {
    const std::size_t n = u.size();
    if (n == 0) throw ParameterError("watermark is empty");
    if (x.size() != n || w.size() != n) {
        std::ostringstream os;
        os << "length mismatch: host " << x.size() << ", watermark " << n << ", displacement "
           << w.size();
        throw ParameterError(os.str());
    }
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    auto& e1 = axes_[0];
    e1.assign(u.values().begin(), u.values().end());
    for (double& value : e1) value /= sqrt_n;

    const double x_norm2 = squared_norm(x);
    auto& e2 = axes_[1];
    e2.assign(x.begin(), x.end());
    project_out(e2, std::span(axes_.data(), 1));
    if (x_norm2 > 0.0 && squared_norm(e2) > kDegenerateRatio * kDegenerateRatio * x_norm2) {
        normalise(e2);
    } else {
        e2 = complete_axis(n, std::span(axes_.data(), 1));
    }

    const double w_norm2 = squared_norm(w);
    auto& e3 = axes_[2];
    e3.assign(w.begin(), w.end());
    project_out(e3, std::span(axes_.data(), 2));
    const bool w_out_of_plane =
        w_norm2 > 0.0 && squared_norm(e3) > kDegenerateRatio * kDegenerateRatio * w_norm2;
    if (w_out_of_plane) {
        normalise(e3);
    } else {
        e3 = complete_axis(n, std::span(axes_.data(), 2));
    }

    coords_.r = x_norm2 / static_cast<double>(n);
    // <x, e2> >= 0 by construction; abs() only guards round-off on the fallback axis.
    coords_.alpha =
        x_norm2 > 0.0 ? std::atan2(dot(x, e1), e2.empty() ? 0.0 : std::abs(dot(x, e2))) : 0.0;
    coords_.v1 = dot(w, e1) / sqrt_n;
    coords_.v2 = e2.empty() ? 0.0 : dot(w, e2) / sqrt_n;
    coords_.v3 = (w_out_of_plane && !e3.empty()) ? dot(w, e3) / sqrt_n : 0.0;
}

std::vector<double> PlaneFrame::reconstruct(double v1, double v2, double v3) const {
    const std::size_t n = axes_[0].size();
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    std::vector<double> w(n, 0.0);
    const std::array<double, 3> coeff{v1, v2, v3};
    for (int k = 0; k < 3; ++k) {
        if (axes_[k].empty() || coeff[k] == 0.0) continue;
        axpy(sqrt_n * coeff[k], axes_[k], w);
    }
    return w;
}

PlaneCoordinates to_plane_coordinates(const HostSignal& x, const WatermarkSequence& u,
                                      std::span<const double> w) {
    return PlaneFrame(x.samples, u, w).coordinates();
}

}  // namespace owm
