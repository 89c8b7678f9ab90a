#include "owm/detector.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace owm {

namespace {

void check_lengths(std::span<const double> s, const WatermarkSequence& u) {
    if (u.size() == 0) throw ParameterError("watermark is empty");
    if (s.size() != u.size()) {
        std::ostringstream os;
        os << "length mismatch: signal " << s.size() << ", watermark " << u.size();
        throw ParameterError(os.str());
    }
}

}  // namespace

double abs_correlation(std::span<const double> s, const WatermarkSequence& u) {
    check_lengths(s, u);
    return abs_correlation(s, u.values());
}

double abs_correlation(std::span<const double> s, std::span<const double> uv) {
    // One pass, extended-precision accumulators.
    long double cross = 0.0L;
    long double energy = 0.0L;
    for (std::size_t i = 0; i < s.size(); ++i) {
        cross += static_cast<long double>(uv[i]) * s[i];
        energy += static_cast<long double>(s[i]) * s[i];
    }
    if (energy == 0.0L) return 0.0;
    const long double n = static_cast<long double>(s.size());
    // |Σ u s / n| / sqrt(Σ s² / n) with Σ u² = n.
    const long double rho = std::fabs(cross) / std::sqrt(energy * n);
    return std::min(1.0, static_cast<double>(rho));
}

double mutual_information_from_correlation(double rho_abs) {
    if (rho_abs >= 1.0) return std::numeric_limits<double>::infinity();
    return -0.5 * std::log1p(-rho_abs * rho_abs);
}

double empirical_mutual_information(std::span<const double> s, const WatermarkSequence& u) {
    return mutual_information_from_correlation(abs_correlation(s, u));
}

DetectionReport detect(std::span<const double> s, const WatermarkSequence& u,
                       const DetectionGeometry& geometry) {
    DetectionReport report;
    report.rho_abs = abs_correlation(s, u);
    report.empirical_mi = mutual_information_from_correlation(report.rho_abs);
    report.threshold = geometry.corr_threshold;
    report.present = report.rho_abs >= report.threshold;
    return report;
}

}  // namespace owm
