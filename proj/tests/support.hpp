#pragma once

// Shared helpers for the test binaries: independent oracle computations and
// small random-instance generators. Everything here stays independent of the
// implementation paths it is used to check (the compound law is rebuilt from
// Poisson-weighted convolution powers, not the recursion).

#include <cmath>
#include <utility>
#include <vector>

#include "cpapprox/detail/random.hpp"
#include "cpapprox/pmf.hpp"

namespace cpxtest {

inline cpx::IntPmf random_pmf(cpx::detail::SplitMix64& rng, std::int64_t lo, std::int64_t hi) {
    std::vector<double> w(static_cast<std::size_t>(hi - lo + 1));
    double total = 0.0;
    for (double& x : w) {
        x = rng.uniform();
        total += x;
    }
    for (double& x : w) x /= total;
    return cpx::IntPmf(lo, std::move(w));
}

// Second pmf blended with an endpoint mass so the means match exactly.
inline std::pair<cpx::IntPmf, cpx::IntPmf> random_equal_mean_pair(cpx::detail::SplitMix64& rng,
                                                                  std::int64_t lo,
                                                                  std::int64_t hi) {
    const cpx::IntPmf a = random_pmf(rng, lo, hi);
    const cpx::IntPmf b0 = random_pmf(rng, lo, hi);
    const double ma = cpx::moments(a).mean;
    const double mb = cpx::moments(b0).mean;
    const bool up = mb <= ma;
    const double anchor = up ? static_cast<double>(hi) : static_cast<double>(lo);
    const double t =
        (anchor == mb) ? 0.0 : (up ? (ma - mb) / (anchor - mb) : (mb - ma) / (mb - anchor));
    std::vector<double> probs(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (std::int64_t k = lo; k <= hi; ++k) {
        probs[static_cast<std::size_t>(k - lo)] = (1.0 - t) * b0.at(k);
    }
    probs[static_cast<std::size_t>((up ? hi : lo) - lo)] += t;
    return {a, cpx::IntPmf(lo, std::move(probs))};
}

inline double max_abs_diff(const cpx::IntPmf& a, const cpx::IntPmf& b) {
    const std::int64_t lo = std::min(a.min_support(), b.min_support());
    const std::int64_t hi = std::max(a.max_support(), b.max_support());
    double worst = 0.0;
    for (std::int64_t k = lo; k <= hi; ++k) {
        worst = std::max(worst, std::abs(a.at(k) - b.at(k)));
    }
    return worst;
}

// Independent route to the compound law: mix m-fold severity convolutions with
// Poisson weights, cutting the count at M where the Poisson tail is < 1e-13.
inline cpx::IntPmf cp_by_mixture_of_convolutions(double lambda, const cpx::IntPmf& severity) {
    std::vector<cpx::IntPmf> parts{cpx::IntPmf::point_mass(0)};
    std::vector<double> weights{std::exp(-lambda)};
    double weight = std::exp(-lambda);
    double cum = weight;
    cpx::IntPmf power = cpx::IntPmf::point_mass(0);
    for (int m = 1; 1.0 - cum >= 1e-13; ++m) {
        power = convolve(power, severity);
        weight *= lambda / m;
        parts.push_back(power);
        weights.push_back(weight);
        cum += weight;
    }
    weights.back() += 1.0 - cum;  // fold the Poisson tail so weights sum to 1
    return mixture(weights, parts);
}

inline double binomial_pmf(int n, int k, double p) {
    const double logc =
        std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
    return std::exp(logc + k * std::log(p) + (n - k) * std::log(1.0 - p));
}

}  // namespace cpxtest
