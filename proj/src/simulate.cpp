#include "owm/simulate.hpp"

#include "owm/detector.hpp"
#include "owm/embedder.hpp"
#include "owm/random.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace owm {

namespace {

constexpr std::uint64_t kWatermarkStream = 1;
constexpr std::uint64_t kGaussianStream = 2;

// Scratch buffers for one worker.
struct TrialWorkspace {
    explicit TrialWorkspace(std::size_t n) : u(n), x(n), s(n) {}
    std::vector<double> u;
    std::vector<double> x;
    std::vector<double> s;
};

void embed_into(const TrialConfig& config, const DetectionGeometry& g, TrialWorkspace& ws) {
    const std::size_t n = config.n;
    const double distortion = config.params.distortion;
    const double x_dot_u = dot(ws.x, ws.u);
    if (config.embedder == EmbedderKind::sign) {
        const double step = (x_dot_u < 0.0 ? -1.0 : 1.0) * std::sqrt(distortion);
        for (std::size_t i = 0; i < n; ++i) ws.s[i] = ws.x[i] + step * ws.u[i];
        return;
    }
    const EmbedCoefficients k = optimal_coefficients(x_dot_u, squared_norm(ws.x), n, distortion, g);
    if (k.in_plane) {
        for (std::size_t i = 0; i < n; ++i) ws.s[i] = k.a * ws.x[i] + k.b * ws.u[i];
        return;
    }
    const EmbedResult full = embed_optimal(HostSignal{ws.x}, WatermarkSequence::from_values(ws.u),
                                           distortion, g);
    std::copy(full.y.begin(), full.y.end(), ws.s.begin());
}

// True when the trial counts as an error for the batch type.
bool run_trial(const TrialConfig& config, const DetectionGeometry& g, std::uint64_t trial,
               TrialWorkspace& ws) {
    const std::uint64_t key_seed = config.pinned_watermark_seed.value_or(
        derive_seed(config.master_seed, trial, kWatermarkStream));
    fill_watermark(ws.u, key_seed);
    GaussianStream gauss(derive_seed(config.master_seed, trial, kGaussianStream));
    const SystemParams& p = config.params;

    if (config.embedder == EmbedderKind::none) {
        gauss.fill_normal(ws.s, p.host_variance + p.attack_variance);
        return abs_correlation(ws.s, ws.u) >= g.corr_threshold;
    }
    gauss.fill_normal(ws.x, p.host_variance);
    embed_into(config, g, ws);
    if (p.attack_variance > 0.0) {
        const double sigma = std::sqrt(p.attack_variance);
        for (double& value : ws.s) value += sigma * gauss.normal();
    }
    return abs_correlation(ws.s, ws.u) < g.corr_threshold;
}

std::uint64_t count_failures_serial(const TrialConfig& config, const DetectionGeometry& g) {
    TrialWorkspace ws(config.n);
    std::uint64_t failures = 0;
    for (std::uint64_t t = 0; t < config.trials; ++t) failures += run_trial(config, g, t, ws) ? 1 : 0;
    return failures;
}

std::uint64_t count_failures_parallel(const TrialConfig& config, const DetectionGeometry& g) {
    std::uint64_t failures = 0;
    const auto trials = static_cast<std::int64_t>(config.trials);
#pragma omp parallel reduction(+ : failures)
    {
        TrialWorkspace ws(config.n);
#pragma omp for schedule(static)
        for (std::int64_t t = 0; t < trials; ++t)
            failures += run_trial(config, g, static_cast<std::uint64_t>(t), ws) ? 1 : 0;
    }
    return failures;
}

TrialBatchResult run_batch(const TrialConfig& config, Execution execution) {
    const DetectionGeometry g = derive_geometry(config.params.fp_exponent);
    const std::uint64_t failures = execution == Execution::parallel
                                       ? count_failures_parallel(config, g)
                                       : count_failures_serial(config, g);
    TrialBatchResult result;
    result.n = config.n;
    result.failures = failures;
    result.trials = config.trials;
    result.master_seed = config.master_seed;
    result.p_hat = static_cast<double>(failures) / static_cast<double>(config.trials);
    const ConfidenceInterval ci = clopper_pearson(failures, config.trials);
    result.ci_low = ci.low;
    result.ci_high = ci.high;
    if (failures == 0) {
        result.empirical_exponent = std::numeric_limits<double>::quiet_NaN();
    } else if (failures == config.trials) {
        result.empirical_exponent = 0.0;
    } else {
        result.empirical_exponent = -std::log(result.p_hat) / static_cast<double>(config.n);
    }
    return result;
}

}  // namespace

const char* to_string(EmbedderKind kind) {
    switch (kind) {
        case EmbedderKind::optimal: return "optimal";
        case EmbedderKind::sign: return "sign";
        case EmbedderKind::none: return "none";
    }
    return "unknown";
}

EmbedderKind parse_embedder_kind(const std::string& name) {
    if (name == "optimal") return EmbedderKind::optimal;
    if (name == "sign") return EmbedderKind::sign;
    if (name == "none") return EmbedderKind::none;
    throw ParameterError("unknown embedder '" + name + "' (expected optimal, sign or none)");
}

void TrialConfig::validate() const {
    params.validate();
    if (n == 0) throw ParameterError("dimension n must be >= 1");
    if (trials == 0) throw ParameterError("trials must be >= 1");
    if (trials > kMaxBatchSamples / n) {
        std::ostringstream os;
        os << "n * trials = " << n << " * " << trials << " exceeds the batch limit of "
           << kMaxBatchSamples << " samples";
        throw ParameterError(os.str());
    }
}

ConfidenceInterval clopper_pearson(std::uint64_t failures, std::uint64_t trials, double coverage) {
    if (trials == 0 || failures > trials) throw ParameterError("need 0 <= failures <= trials, trials >= 1");
    if (!(coverage > 0.0 && coverage < 1.0)) throw ParameterError("coverage must be in (0, 1)");
    const double k = static_cast<double>(failures);
    const double m = static_cast<double>(trials);
    const double alpha = 1.0 - coverage;
    ConfidenceInterval ci;
    if (failures == 0) {
        ci.low = 0.0;
        ci.high = 1.0 - std::pow(alpha, 1.0 / m);
    } else if (failures == trials) {
        ci.low = std::pow(alpha, 1.0 / m);
        ci.high = 1.0;
    } else {
        ci.low = boost::math::ibeta_inv(k, m - k + 1.0, alpha / 2);
        ci.high = boost::math::ibeta_inv(k + 1.0, m - k, 1.0 - alpha / 2);
    }
    return ci;
}

TrialBatchResult simulate_fn(const TrialConfig& config, Execution execution) {
    config.validate();
    if (config.embedder == EmbedderKind::none)
        throw ParameterError("false-negative batches need an embedder (optimal or sign)");
    return run_batch(config, execution);
}

TrialBatchResult simulate_fp(const TrialConfig& config, Execution execution) {
    config.validate();
    if (config.embedder != EmbedderKind::none)
        throw ParameterError("false-positive batches take embedder = none");
    return run_batch(config, execution);
}

std::vector<std::pair<std::size_t, TrialBatchResult>> exponent_convergence_sweep(
    const TrialConfig& base, const std::vector<std::size_t>& n_list, Execution execution) {
    for (std::size_t n : n_list)
        if (n < 4) throw ParameterError("every n in a convergence sweep must be >= 4");
    std::vector<std::pair<std::size_t, TrialBatchResult>> rows;
    rows.reserve(n_list.size());
    for (std::size_t n : n_list) {
        TrialConfig config = base;
        config.n = n;
        rows.emplace_back(n, simulate_fn(config, execution));
    }
    return rows;
}

double theory_exponent(const TrialConfig& config) {
    switch (config.embedder) {
        case EmbedderKind::optimal: return efn_closed_form(config.params).e_fn;
        case EmbedderKind::none: return config.params.fp_exponent;
        case EmbedderKind::sign: break;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace owm
