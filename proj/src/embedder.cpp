#include "owm/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace owm {

namespace {

void check_inputs(const HostSignal& x, const WatermarkSequence& u, double distortion) {
    if (u.size() == 0) throw ParameterError("watermark is empty");
    if (x.size() != u.size()) {
        std::ostringstream os;
        os << "length mismatch: host " << x.size() << ", watermark " << u.size();
        throw ParameterError(os.str());
    }
    if (!std::isfinite(distortion) || distortion <= 0.0)
        throw ParameterError("distortion must be finite and > 0");
}

double per_dimension_distortion(std::span<const double> x, std::span<const double> y) {
    long double acc = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long double d = static_cast<long double>(y[i]) - x[i];
        acc += d * d;
    }
    return static_cast<double>(acc / static_cast<long double>(x.size()));
}

}  // namespace

const char* to_string(EmbedBranch branch) {
    switch (branch) {
        case EmbedBranch::optimal: return "optimal";
        case EmbedBranch::degenerate_shrink: return "degenerate-shrink";
        case EmbedBranch::sign: return "sign";
    }
    return "unknown";
}

Displacement optimal_displacement(double r, double alpha, double distortion,
                                  const DetectionGeometry& geometry) {
    const double c = geometry.cos2_beta;
    const double radicand = distortion - r * c * c;
    Displacement v;
    if (radicand >= 0.0) {
        v.v1 = std::sin(alpha) < 0.0 ? -std::sqrt(radicand) : std::sqrt(radicand);
        v.v2 = -std::sqrt(r) * c;
        v.branch = EmbedBranch::optimal;
    } else {
        v.v1 = 0.0;
        v.v2 = -std::sqrt(distortion);
        v.branch = EmbedBranch::degenerate_shrink;
    }
    return v;
}

EmbedCoefficients optimal_coefficients(double x_dot_u, double x_norm2, std::size_t n,
                                       double distortion, const DetectionGeometry& geometry) {
    EmbedCoefficients out;
    if (x_norm2 <= 0.0) {
        // r = 0: everything along u.
        out.a = 1.0;
        out.b = std::sqrt(distortion);
        out.coords = {0.0, 0.0, out.b, 0.0, 0.0};
        return out;
    }
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double along_u = x_dot_u / sqrt_n;  // <x, e1>
    const double across = std::sqrt(std::max(0.0, x_norm2 - along_u * along_u));  // <x, e2>
    const double r = x_norm2 / static_cast<double>(n);
    const double alpha = std::atan2(along_u, across);
    const Displacement v = optimal_displacement(r, alpha, distortion, geometry);

    out.coords = {r, alpha, v.v1, v.v2, 0.0};
    out.branch = v.branch;
    // across² carries an absolute rounding error of order ε‖x‖²; below this ratio the
    // coefficients lose digits and the caller must go through the explicit frame.
    out.in_plane = across * across > 1e-6 * x_norm2;
    if (out.in_plane) {
        // w = sqrt(n)(v1 e1 + v2 e2), e2 = (x - along_u e1) / across.
        out.a = 1.0 + sqrt_n * v.v2 / across;
        out.b = v.v1 - v.v2 * along_u / across;
    } else {
        out.a = std::numeric_limits<double>::quiet_NaN();
        out.b = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

EmbedResult embed_optimal(const HostSignal& x, const WatermarkSequence& u, double distortion,
                          const DetectionGeometry& geometry) {
    check_inputs(x, u, distortion);
    const std::size_t n = u.size();
    const EmbedCoefficients k =
        optimal_coefficients(dot(x.samples, u.values()), squared_norm(x.samples), n, distortion,
                             geometry);

    EmbedResult result;
    result.coords = k.coords;
    result.branch = k.branch;
    result.a = k.a;
    result.b = k.b;
    result.y.resize(n);
    if (k.in_plane) {
        for (std::size_t i = 0; i < n; ++i) result.y[i] = k.a * x.samples[i] + k.b * u[i];
    } else {
        // Host (nearly) parallel to u: take the second axis from Gram-Schmidt on x itself,
        // or from the frame's deterministic completion when x is exactly parallel.
        const std::vector<double> zero(n, 0.0);
        const PlaneFrame frame(x.samples, u, zero);
        const PlaneCoordinates& pc = frame.coordinates();
        Displacement v = optimal_displacement(pc.r, pc.alpha, distortion, geometry);
        result.branch = v.branch;
        result.a = std::numeric_limits<double>::quiet_NaN();
        result.b = std::numeric_limits<double>::quiet_NaN();
        if (frame.axis(1).empty()) {
            // n = 1: no direction other than u exists.
            v.v1 = std::sin(pc.alpha) < 0.0 ? -std::sqrt(distortion) : std::sqrt(distortion);
            v.v2 = 0.0;
            result.a = 1.0;
            result.b = v.v1;
        } else {
            const double across = dot(x.samples, frame.axis(1));
            if (across > 1e-12 * std::sqrt(squared_norm(x.samples))) {
                const double sqrt_n = std::sqrt(static_cast<double>(n));
                result.a = 1.0 + sqrt_n * v.v2 / across;
                result.b = v.v1 - v.v2 * dot(x.samples, frame.axis(0)) / across;
            }
        }
        result.coords = {pc.r, pc.alpha, v.v1, v.v2, 0.0};
        const std::vector<double> w = frame.reconstruct(v.v1, v.v2, 0.0);
        for (std::size_t i = 0; i < n; ++i) result.y[i] = x.samples[i] + w[i];
    }
    result.distortion_used = per_dimension_distortion(x.samples, result.y);
    return result;
}

EmbedResult embed_sign(const HostSignal& x, const WatermarkSequence& u, double distortion) {
    check_inputs(x, u, distortion);
    const std::size_t n = u.size();
    const double x_dot_u = dot(x.samples, u.values());
    const double x_norm2 = squared_norm(x.samples);
    const double step = (x_dot_u < 0.0 ? -1.0 : 1.0) * std::sqrt(distortion);

    EmbedResult result;
    result.branch = EmbedBranch::sign;
    result.a = 1.0;
    result.b = step;
    result.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) result.y[i] = x.samples[i] + step * u[i];

    const double sqrt_n = std::sqrt(static_cast<double>(n));
    const double along_u = x_dot_u / sqrt_n;
    const double across = std::sqrt(std::max(0.0, x_norm2 - along_u * along_u));
    result.coords.r = x_norm2 / static_cast<double>(n);
    result.coords.alpha = x_norm2 > 0.0 ? std::atan2(along_u, across) : 0.0;
    result.coords.v1 = step;
    result.distortion_used = per_dimension_distortion(x.samples, result.y);
    return result;
}

double embedding_t1(const PlaneCoordinates& coords, const DetectionGeometry& geometry) {
    const double sqrt_r = std::sqrt(coords.r);
    const double along = sqrt_r * std::sin(coords.alpha) + coords.v1;
    const double across = sqrt_r * std::cos(coords.alpha) + coords.v2;
    return along * along * geometry.tan2_beta() - across * across - coords.v3 * coords.v3;
}

}  // namespace owm
