#include "owm/sphere.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace owm::sphere {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRelTol = 1e-10;
// Integrand values below e^{-kTailCut} of the peak are dropped.
constexpr double kTailCut = 60.0;

double integrate(auto&& f, double a, double b) {
    if (!(b > a)) return 0.0;
    double error = 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, kRelTol,
                                                                         &error);
}

// m ln(sin φ / sin hi), without the cancellation of two large logarithms.
double relative_log_sine(int m, double phi, double hi) {
    const double diff = 2.0 * std::cos(0.5 * (phi + hi)) * std::sin(0.5 * (phi - hi));
    return m * std::log1p(diff / std::sin(hi));
}

// ∫ (sin φ / sin hi)^m over [max(from, tail), hi], peak at hi <= π/2.
double rising_part(int m, double from, double hi) {
    const double tail = std::asin(std::sin(hi) * std::exp(-kTailCut / m));
    auto f = [m, hi](double phi) { return std::exp(relative_log_sine(m, phi, hi)); };
    return integrate(f, std::max(from, tail), hi);
}

}  // namespace

double log_sine_power_integral(int m, double theta) {
    if (m < 0) throw ParameterError("sine power must be >= 0");
    if (!(theta > 0.0) || theta > kPi) throw ParameterError("integration limit must be in (0, pi]");
    if (m == 0) return std::log(theta);

    if (theta <= kPi / 2) {
        const double peak_log = m * std::log(std::sin(theta));
        return std::log(rising_part(m, 0.0, theta)) + peak_log;
    }
    // Peak at π/2; the part beyond π/2 mirrors [π - θ, π/2].
    const double left = rising_part(m, 0.0, kPi / 2);
    const double right = rising_part(m, kPi - theta, kPi / 2);
    return std::log(left + right);
}

double cap_area_log(int n, double theta) {
    if (n < 2) throw ParameterError("sphere dimension must be >= 2");
    if (!std::isfinite(theta) || theta < 0.0 || theta > kPi) {
        std::ostringstream os;
        os << "cap half-angle " << theta << " outside [0, pi]";
        throw ParameterError(os.str());
    }
    if (theta == 0.0) return -std::numeric_limits<double>::infinity();
    const double nd = n;
    const double log_prefactor = std::log(nd - 1.0) + 0.5 * (nd - 1.0) * std::log(kPi) -
                                 boost::math::lgamma(0.5 * (nd + 1.0));
    return log_prefactor + log_sine_power_integral(n - 2, theta);
}

double exact_fp_probability_log(int n, const DetectionGeometry& geometry) {
    const double value =
        std::log(2.0) + cap_area_log(n, geometry.beta) - cap_area_log(n, kPi);
    return std::min(value, 0.0);
}

double angle_pdf(int n, double alpha) {
    if (n < 3) throw ParameterError("angle density needs n >= 3");
    if (!std::isfinite(alpha) || std::abs(alpha) > kPi / 2) {
        std::ostringstream os;
        os << "angle " << alpha << " outside [-pi/2, pi/2]";
        throw ParameterError(os.str());
    }
    const double c = std::cos(alpha);
    if (c <= 0.0) return 0.0;
    const double nd = n;
    const double log_norm = boost::math::lgamma(0.5 * nd) - boost::math::lgamma(0.5 * (nd - 1.0)) -
                            0.5 * std::log(kPi);
    return std::exp(log_norm + (nd - 2.0) * std::log(c));
}

}  // namespace owm::sphere
