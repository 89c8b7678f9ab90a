#pragma once

// Seeded Monte Carlo estimation of false-negative / false-positive rates.
//
// Trial t draws its watermark from derive_seed(master, t, 1) (or a pinned
// seed) and its Gaussian host/noise from derive_seed(master, t, 2). Counts
// are integers, so the OpenMP kernel and the serial reference kernel return
// bit-identical batches for any thread count.

#include "owm/exponents.hpp"
#include "owm/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace owm {

enum class EmbedderKind { optimal, sign, none };

const char* to_string(EmbedderKind kind);
EmbedderKind parse_embedder_kind(const std::string& name);

struct TrialConfig {
    std::size_t n = 0;
    std::uint64_t trials = 0;
    SystemParams params;
    EmbedderKind embedder = EmbedderKind::optimal;
    std::uint64_t master_seed = 0;
    /// Same key for every trial when set (default: fresh key per trial).
    std::optional<std::uint64_t> pinned_watermark_seed;

    void validate() const;
};

struct TrialBatchResult {
    std::size_t n = 0;
    std::uint64_t failures = 0;
    std::uint64_t trials = 0;
    double p_hat = 0.0;
    double ci_low = 0.0;   ///< Clopper-Pearson 95%; one-sided at 0 or `trials` failures
    double ci_high = 0.0;
    double empirical_exponent = 0.0;  ///< -(1/n) ln p_hat; NaN when failures = 0
    std::uint64_t master_seed = 0;

    bool operator==(const TrialBatchResult&) const = default;
};

struct ConfidenceInterval {
    double low = 0.0;
    double high = 1.0;
};

/// Exact binomial interval at the given coverage (default 95%).
ConfidenceInterval clopper_pearson(std::uint64_t failures, std::uint64_t trials,
                                   double coverage = 0.95);

/// Upper bound on total samples (n · trials) a single batch may request.
inline constexpr std::uint64_t kMaxBatchSamples = 1ULL << 40;

/// Fraction of watermarked trials the detector misses. Requires embedder != none.
TrialBatchResult simulate_fn(const TrialConfig& config, Execution execution = Execution::parallel);

/// Fraction of unmarked N(0, σ_X² + σ_Z²) signals flagged. Requires embedder == none.
TrialBatchResult simulate_fp(const TrialConfig& config, Execution execution = Execution::parallel);

/// One simulate_fn batch per n (each n >= 4), all under base.master_seed.
std::vector<std::pair<std::size_t, TrialBatchResult>> exponent_convergence_sweep(
    const TrialConfig& base, const std::vector<std::size_t>& n_list,
    Execution execution = Execution::parallel);

/// Asymptotic rate the batch is estimating: E_fn* for the optimum embedder,
/// λ for false-positive batches, NaN for the sign embedder (no closed form here).
double theory_exponent(const TrialConfig& config);

}  // namespace owm
