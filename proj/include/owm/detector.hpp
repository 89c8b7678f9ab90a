#pragma once

#include "owm/model.hpp"

#include <span>

namespace owm {

/// Outcome of thresholding the normalised correlation of s with u.
struct DetectionReport {
    double rho_abs = 0.0;       ///< |<u,s>/n| / sqrt(‖s‖²/n), in [0, 1]
    double empirical_mi = 0.0;  ///< -½ ln(1 - rho²) in nats; +inf when rho = 1
    double threshold = 0.0;     ///< sqrt(1 - e^{-2λ})
    bool present = false;       ///< rho_abs >= threshold
};

/// Absolute normalised correlation. Defined as 0 for an all-zero s.
double abs_correlation(std::span<const double> s, const WatermarkSequence& u);

/// Same statistic against raw ±1 values (unchecked); used by the trial kernels.
double abs_correlation(std::span<const double> s, std::span<const double> u);

/// Gaussian empirical mutual information between u and s.
double empirical_mutual_information(std::span<const double> s, const WatermarkSequence& u);

/// Two-hypercone detector. The region is closed: rho_abs == threshold decides present.
DetectionReport detect(std::span<const double> s, const WatermarkSequence& u,
                       const DetectionGeometry& geometry);

/// -½ ln(1 - rho²), +inf at rho = 1.
double mutual_information_from_correlation(double rho_abs);

}  // namespace owm
