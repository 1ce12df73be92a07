#include "cpapprox/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "cpapprox/detail/summation.hpp"

namespace cpx {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double log_poisson(double rate, std::int64_t k) {
    return -rate + static_cast<double>(k) * std::log(rate) - std::lgamma(static_cast<double>(k) + 1.0);
}

}  // namespace

IntPmf::IntPmf(std::int64_t offset, std::vector<double> probs, TotalMass total)
    : offset_(offset), probs_(std::move(probs)), deficit_(0.0) {
    canonicalize(/*clamp_deficit=*/total == TotalMass::truncated);
    if (total == TotalMass::exhaustive) deficit_ = 0.0;
}

IntPmf::IntPmf(std::int64_t offset, std::vector<double> probs, double deficit)
    : offset_(offset), probs_(std::move(probs)), deficit_(deficit) {
    require(deficit >= 0.0 && deficit <= 1.0, "IntPmf: deficit must be in [0, 1]");
    canonicalize(/*clamp_deficit=*/false);
    if (std::abs(mass() + deficit_ - 1.0) > 1e-12) {
        throw std::invalid_argument("IntPmf: probs and deficit do not sum to 1");
    }
}

IntPmf IntPmf::point_mass(std::int64_t x) {
    IntPmf r;
    r.offset_ = x;
    return r;
}

double IntPmf::mass() const noexcept { return detail::sum(probs_); }

void IntPmf::canonicalize(bool clamp_deficit) {
    require(!probs_.empty(), "IntPmf: empty probs");
    for (double& p : probs_) {
        require(std::isfinite(p) && p >= 0.0, "IntPmf: probabilities must be finite and >= 0");
        if (p == 0.0) p = 0.0;  // normalize -0.0
    }
    std::size_t first = 0;
    while (first < probs_.size() && probs_[first] == 0.0) ++first;
    require(first < probs_.size(), "IntPmf: pmf carries no mass");
    std::size_t last = probs_.size();
    while (last > first && probs_[last - 1] == 0.0) --last;
    if (first > 0 || last < probs_.size()) {
        probs_ = std::vector<double>(probs_.begin() + static_cast<std::ptrdiff_t>(first),
                                     probs_.begin() + static_cast<std::ptrdiff_t>(last));
        offset_ += static_cast<std::int64_t>(first);
    }
    const double total = mass();
    require(total <= 1.0 + 1e-9, "IntPmf: probabilities sum above 1");
    if (clamp_deficit) deficit_ = std::max(0.0, 1.0 - total);
}

Moments moments(const IntPmf& a) {
    detail::NeumaierSum m1;
    detail::NeumaierSum m2;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = static_cast<double>(a.offset() + static_cast<std::int64_t>(i));
        m1.add(a.probs()[i] * x);
        m2.add(a.probs()[i] * x * x);
    }
    const double mean = m1.value();
    const double second = m2.value();
    return {mean, second, second - mean * mean};
}

IntPmf poisson_pmf(double rate, double eps) {
    require(std::isfinite(rate) && rate >= 0.0, "poisson_pmf: rate must be >= 0");
    require(eps > 0.0 && eps < 1.0, "poisson_pmf: eps must be in (0, 1)");
    if (rate == 0.0) return IntPmf::point_mass(0);

    // Window sized from the Bernstein tail e^{-t^2 / (2(rate + t/3))}, then
    // verified against the requested deficit and widened if needed.
    const double big = std::log(1.0 / eps) + 8.0;
    double halfwidth = big / 3.0 + std::sqrt(big * big / 9.0 + 2.0 * rate * big) + 16.0;
    for (int attempt = 0; attempt < 8; ++attempt) {
        const std::int64_t mode = static_cast<std::int64_t>(rate);
        const std::int64_t lo = std::max<std::int64_t>(0, mode - static_cast<std::int64_t>(halfwidth));
        const std::int64_t hi = mode + static_cast<std::int64_t>(halfwidth);
        std::vector<double> probs(static_cast<std::size_t>(hi - lo + 1));
        for (std::int64_t k = lo; k <= hi; ++k) {
            probs[static_cast<std::size_t>(k - lo)] = std::exp(log_poisson(rate, k));
        }
        IntPmf out(lo, std::move(probs));
        if (out.deficit() <= eps) return out;
        halfwidth *= 2.0;
    }
    throw std::runtime_error("poisson_pmf: could not reach requested truncation tolerance");
}

IntPmf geometric_pmf(double p, double eps) {
    require(p > 0.0 && p < 1.0, "geometric_pmf: p must be in (0, 1)");
    require(eps > 0.0 && eps < 1.0, "geometric_pmf: eps must be in (0, 1)");
    // Tail mass beyond x = t is p^t.
    const double t = std::ceil(std::log(eps) / std::log(p));
    const std::int64_t top = std::max<std::int64_t>(1, static_cast<std::int64_t>(t));
    const double q = 1.0 - p;
    std::vector<double> probs(static_cast<std::size_t>(top));
    double px = 1.0;
    for (std::int64_t x = 1; x <= top; ++x) {
        probs[static_cast<std::size_t>(x - 1)] = q * px;
        px *= p;
    }
    return IntPmf(1, std::move(probs));
}

IntPmf truncated_geometric_pmf(double p, std::int64_t k) {
    require(p > 0.0 && p < 1.0, "truncated_geometric_pmf: p must be in (0, 1)");
    require(k >= 1, "truncated_geometric_pmf: k must be >= 1");
    const double q = 1.0 - p;
    std::vector<double> probs(static_cast<std::size_t>(k));
    double px = 1.0;
    for (std::int64_t x = 1; x < k; ++x) {
        probs[static_cast<std::size_t>(x - 1)] = q * px;
        px *= p;
    }
    probs[static_cast<std::size_t>(k - 1)] = px;  // all tail mass folded onto k
    return IntPmf(1, std::move(probs), IntPmf::TotalMass::exhaustive);
}

IntPmf compound_poisson_pmf(const CompoundSpec& spec, double eps) {
    require(std::isfinite(spec.rate) && spec.rate > 0.0, "compound_poisson_pmf: rate must be > 0");
    require(eps > 0.0 && eps < 1.0, "compound_poisson_pmf: eps must be in (0, 1)");
    const IntPmf& sev = spec.compounding;
    require(sev.offset() >= 1, "compound_poisson_pmf: compounding law must have no mass at or below 0");
    require(sev.deficit() <= eps, "compound_poisson_pmf: compounding deficit exceeds eps");
    // The recursion's total mass converges to e^{-rate * sev.deficit}; make
    // sure the requested deficit is reachable at all.
    if (spec.rate * sev.deficit() > eps / 2.0) {
        throw std::invalid_argument(
            "compound_poisson_pmf: severity truncation too coarse for requested eps");
    }

    const double p0 = std::exp(-spec.rate);
    if (p0 < std::numeric_limits<double>::min()) {
        throw std::invalid_argument(
            "compound_poisson_pmf: e^{-rate} underflows; rate too large for linear-space recursion");
    }

    const std::int64_t top = sev.max_support();
    const Moments sm = moments(sev);
    const double cap_d =
        (spec.rate + 12.0 * std::sqrt(spec.rate * std::max(1.0, sm.second_raw)) + 80.0) *
            static_cast<double>(top) +
        256.0;
    const std::size_t cap = static_cast<std::size_t>(cap_d);

    std::vector<double> probs{p0};
    detail::NeumaierSum cum;
    cum.add(p0);
    std::size_t n = 0;
    while (1.0 - cum.value() > eps) {
        if (++n > cap) {
            throw std::runtime_error("compound_poisson_pmf: recursion failed to converge");
        }
        detail::NeumaierSum acc;
        const std::int64_t jmax = std::min<std::int64_t>(static_cast<std::int64_t>(n), top);
        for (std::int64_t j = sev.offset(); j <= jmax; ++j) {
            const double fj = sev.at(j);
            if (fj != 0.0) acc.add(static_cast<double>(j) * fj * probs[n - static_cast<std::size_t>(j)]);
        }
        const double pn = spec.rate / static_cast<double>(n) * acc.value();
        probs.push_back(pn);
        cum.add(pn);
    }
    return IntPmf(0, std::move(probs));
}

IntPmf polya_aeppli_pmf(double lambda, double p, double eps) {
    require(std::isfinite(lambda) && lambda > 0.0, "polya_aeppli_pmf: lambda must be > 0");
    require(p > 0.0 && p < 1.0, "polya_aeppli_pmf: p must be in (0, 1)");
    require(eps > 0.0 && eps < 1.0, "polya_aeppli_pmf: eps must be in (0, 1)");
    // Split the budget so the composed deficit stays <= eps: the severity
    // truncation inflates the recursion's limiting deficit by at most
    // lambda * eps_sev.
    const double eps_sev = std::max(1e-300, eps / (2.0 * std::max(1.0, lambda)));
    return compound_poisson_pmf({lambda, geometric_pmf(p, eps_sev)}, eps);
}

IntPmf convolve(const IntPmf& a, const IntPmf& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a.probs()[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) {
            out[i + j] += ai * b.probs()[j];
        }
    }
    return IntPmf(a.offset() + b.offset(), std::move(out));
}

IntPmf mixture(std::span<const double> weights, std::span<const IntPmf> parts) {
    require(!parts.empty(), "mixture: no parts");
    require(weights.size() == parts.size(), "mixture: weights/parts length mismatch");
    detail::NeumaierSum wsum;
    for (double w : weights) {
        require(std::isfinite(w) && w >= 0.0, "mixture: weights must be >= 0");
        wsum.add(w);
    }
    require(std::abs(wsum.value() - 1.0) <= 1e-12, "mixture: weights must sum to 1");

    std::int64_t lo = parts[0].min_support();
    std::int64_t hi = parts[0].max_support();
    for (const IntPmf& part : parts) {
        lo = std::min(lo, part.min_support());
        hi = std::max(hi, part.max_support());
    }
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (weights[i] == 0.0) continue;
        const IntPmf& part = parts[i];
        for (std::size_t j = 0; j < part.size(); ++j) {
            out[static_cast<std::size_t>(part.offset() - lo) + j] += weights[i] * part.probs()[j];
        }
    }
    return IntPmf(lo, std::move(out));
}

IntPmf poisson_binomial_pmf(std::span<const double> ps) {
    std::vector<double> out{1.0};
    for (double p : ps) {
        require(std::isfinite(p) && p >= 0.0 && p <= 1.0, "poisson_binomial_pmf: p must be in [0, 1]");
        std::vector<double> next(out.size() + 1, 0.0);
        const double q = 1.0 - p;
        for (std::size_t i = 0; i < out.size(); ++i) {
            next[i] += q * out[i];
            next[i + 1] += p * out[i];
        }
        out = std::move(next);
    }
    return IntPmf(0, std::move(out), IntPmf::TotalMass::exhaustive);
}

IntPmf bernoulli_pmf(double p) {
    require(std::isfinite(p) && p >= 0.0 && p <= 1.0, "bernoulli_pmf: p must be in [0, 1]");
    if (p == 0.0) return IntPmf::point_mass(0);
    if (p == 1.0) return IntPmf::point_mass(1);
    return IntPmf(0, {1.0 - p, p}, IntPmf::TotalMass::exhaustive);
}

}  // namespace cpx
