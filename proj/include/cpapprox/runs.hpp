#pragma once

#include <cstdint>
#include <optional>

#include "cpapprox/bounds.hpp"
#include "cpapprox/pmf.hpp"

namespace cpx {

// Overlapping success runs of length k in n i.i.d. Bernoulli(p) trials.
struct RunsConfig {
    std::int64_t n = 1;
    std::int64_t k = 1;
    double p = 0.5;

    double q() const noexcept { return 1.0 - p; }
    double p_pow_k() const noexcept;
    std::int64_t windows() const noexcept { return n - k + 1; }
    double lambda_po() const noexcept;  // (n - k + 1) p^k
    double lambda_cp() const noexcept;  // (n - k + 1) q p^k
    double m_po() const noexcept;       // (3k - 2) p^k
    double m_cp() const noexcept;       // (6k - 2) q p^k
    void validate() const;              // 1 <= k <= n, p in (0, 1)
};

// Poisson target: run count vs Po((n-k+1) p^k). The norm is the exact Poisson
// second-difference norm; no caller input needed.
BoundReport runs_po_bound(const RunsConfig& cfg);

// Probability that the raw clump sizes differ from their k-truncated
// stationary versions: (n - 2k + 1) q p^{2k} + 2 p^{k+1} (first term floored
// at 0 when the range is empty). Requires k >= 2.
double declumping_bound(const RunsConfig& cfg);

// Truncated-clump sum vs CP(lambda, geometric truncated at k). `norm` is the
// numeric second-difference norm of that compound law (see runs_cp_norm).
// Requires k >= 2.
BoundReport runs_cp_bound(const RunsConfig& cfg, double norm);

// Quadrant-dependence refinement of runs_cp_bound (the truncated clump sums
// are negatively quadrant dependent). Requires k >= 2.
BoundReport runs_cp_bound_improved(const RunsConfig& cfg, double norm);

// Distance cost of swapping the truncated-geometric compounding law for the
// full geometric one: lambda * p^k.
double compounding_swap_bound(double lambda, const RunsConfig& cfg);

// Run count vs the Polya-Aeppli law PA((n-k+1) q p^k, p): declumping +
// runs_cp_bound + compounding swap. Computes the compound norm internally with
// truncation tolerance eps. Requires k >= 2.
BoundReport total_pa_bound(const RunsConfig& cfg, double eps = kDefaultEps);
BoundReport total_pa_bound(const RunsConfig& cfg, double norm, NormMethod method);

// Numeric second-difference norm of CP(lambda_cp, truncated geometric).
double runs_cp_norm(const RunsConfig& cfg, double eps = kDefaultEps);

// Published asymptotic comparator values for the same two approximations.
// These are asymptotic-only expressions, not certified bounds; absent when p
// is outside their stated ranges (p <= 1/3).
struct SteinChenComparators {
    std::optional<double> po;
    std::optional<double> cp;
};
SteinChenComparators stein_chen_comparators(const RunsConfig& cfg);

// Moment profile of the run indicators X_i = Z_i ... Z_{i+k-1} (k-dependent,
// unit severities), ready for the k-dependent bounds.
LocalDepProfile run_indicator_profile(const RunsConfig& cfg);

// Moment profile of the stationary truncated clump sizes (2k-dependent,
// truncated-geometric severities). Requires k >= 2.
LocalDepProfile declumped_run_profile(const RunsConfig& cfg);

}  // namespace cpx
