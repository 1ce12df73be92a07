#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace cpx {

// Default truncation tolerance: every infinite-support constructor guarantees
// deficit <= eps, and downstream metrics turn deficits into rigorous error bars.
inline constexpr double kDefaultEps = 1e-12;

// Finite-support probability mass function on the integers. `deficit` is the
// total mass truncated away (1 - sum of probs), kept explicit so callers can
// account for tails. Canonical form: leading/trailing zero entries trimmed.
class IntPmf {
public:
    enum class TotalMass { truncated, exhaustive };

    // Point mass at 0.
    IntPmf() : offset_(0), probs_{1.0}, deficit_(0.0) {}

    // `truncated`: deficit = max(0, 1 - sum(probs)).
    // `exhaustive`: the support is known complete; deficit is pinned to 0.
    IntPmf(std::int64_t offset, std::vector<double> probs,
           TotalMass total = TotalMass::truncated);

    // Reconstruction with an explicitly recorded deficit (JSON round-trips).
    IntPmf(std::int64_t offset, std::vector<double> probs, double deficit);

    static IntPmf point_mass(std::int64_t x);

    std::int64_t offset() const noexcept { return offset_; }
    const std::vector<double>& probs() const noexcept { return probs_; }
    double deficit() const noexcept { return deficit_; }

    std::int64_t min_support() const noexcept { return offset_; }
    std::int64_t max_support() const noexcept {
        return offset_ + static_cast<std::int64_t>(probs_.size()) - 1;
    }
    std::size_t size() const noexcept { return probs_.size(); }

    // Probability at k; 0 outside the stored support.
    double at(std::int64_t k) const noexcept {
        const std::int64_t idx = k - offset_;
        if (idx < 0 || idx >= static_cast<std::int64_t>(probs_.size())) return 0.0;
        return probs_[static_cast<std::size_t>(idx)];
    }

    // Sum of stored probabilities (1 - deficit up to rounding).
    double mass() const noexcept;

private:
    std::int64_t offset_;
    std::vector<double> probs_;
    double deficit_;

    void canonicalize(bool clamp_deficit);
};

struct Moments {
    double mean;
    double second_raw;
    double variance;
};

// Exact sums over the stored support; the truncated tail is excluded and the
// caller owns the deficit accounting.
Moments moments(const IntPmf& a);

// Poisson rate plus a severity law supported on {1, 2, ...}.
struct CompoundSpec {
    double rate;
    IntPmf compounding;
};

IntPmf poisson_pmf(double rate, double eps = kDefaultEps);
IntPmf geometric_pmf(double p, double eps = kDefaultEps);
IntPmf truncated_geometric_pmf(double p, std::int64_t k);
IntPmf compound_poisson_pmf(const CompoundSpec& spec, double eps = kDefaultEps);
IntPmf polya_aeppli_pmf(double lambda, double p, double eps = kDefaultEps);

IntPmf convolve(const IntPmf& a, const IntPmf& b);
IntPmf mixture(std::span<const double> weights, std::span<const IntPmf> parts);
IntPmf poisson_binomial_pmf(std::span<const double> ps);
IntPmf bernoulli_pmf(double p);

}  // namespace cpx
