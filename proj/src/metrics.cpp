#include "cpapprox/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cpapprox/detail/summation.hpp"

namespace cpx {

MetricValue tv_distance(const IntPmf& a, const IntPmf& b) {
    const std::int64_t lo = std::min(a.min_support(), b.min_support());
    const std::int64_t hi = std::max(a.max_support(), b.max_support());

    detail::NeumaierSum l1;
    detail::NeumaierSum overlap;
    for (std::int64_t k = lo; k <= hi; ++k) {
        const double pa = a.at(k);
        const double pb = b.at(k);
        l1.add(std::abs(pa - pb));
        overlap.add(std::min(pa, pb));
    }
    const double value = 0.5 * l1.value();
    const double deficit_corr = 0.5 * (a.deficit() + b.deficit());

    const double via_overlap = 1.0 - overlap.value() - deficit_corr;
    if (std::abs(value - via_overlap) > 1e-12) {
        throw std::logic_error("tv_distance: half-L1 and coupling-overlap routes disagree");
    }
    return {value, deficit_corr};
}

MetricValue zeta2(const IntPmf& a, const IntPmf& b, double mean_tol) {
    const double mean_a = moments(a).mean;
    const double mean_b = moments(b).mean;
    const double dmean = std::abs(mean_a - mean_b);
    if (!(dmean <= mean_tol)) {
        throw std::invalid_argument("zeta2: operands must have equal means (within mean_tol)");
    }

    const std::int64_t lo = std::min(a.min_support(), b.min_support());
    const std::int64_t hi = std::max(a.max_support(), b.max_support());
    const std::size_t width = static_cast<std::size_t>(hi - lo + 1);

    // Accumulate the pmf *difference* so the cdf gap stays well conditioned in
    // the tails (accumulating both cdfs to ~1 and subtracting loses the tail
    // to the last ulp).
    std::vector<double> cdf_gap(width);
    detail::NeumaierSum gap;
    for (std::int64_t u = lo; u <= hi; ++u) {
        gap.add(a.at(u) - b.at(u));
        cdf_gap[static_cast<std::size_t>(u - lo)] = gap.value();
    }

    detail::NeumaierSum tail;
    detail::NeumaierSum total;
    for (std::size_t i = width; i-- > 0;) {
        tail.add(cdf_gap[i]);
        total.add(std::abs(tail.value()));
    }

    const double w = static_cast<double>(width) + 2.0;
    const double error_bar = (a.deficit() + b.deficit() + dmean) * w +
                             64.0 * std::numeric_limits<double>::epsilon() * w;
    return {total.value(), error_bar};
}

}  // namespace cpx
