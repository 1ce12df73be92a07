#include "cpapprox/smoothness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cpapprox/detail/summation.hpp"

namespace cpx {

namespace {

constexpr double kSqrt2PiE = 4.132731354122493;  // sqrt(2 pi e)

void require_positive(double lambda, const char* who) {
    if (!(std::isfinite(lambda) && lambda > 0.0)) {
        throw std::invalid_argument(std::string(who) + ": lambda must be > 0");
    }
}

// First backward difference of the Poisson pmf at k:
//   e^{-lambda} lambda^k / k! (1 - k / lambda), zero for k < 0.
double poisson_delta_f(double lambda, std::int64_t k) {
    if (k < 0) return 0.0;
    const double logp = -lambda + static_cast<double>(k) * std::log(lambda) -
                        std::lgamma(static_cast<double>(k) + 1.0);
    return std::exp(logp) * (1.0 - static_cast<double>(k) / lambda);
}

// Largest first-difference value, attained at floor(rho1) with
// rho1 = lambda - sqrt(lambda + 1/4) + 1/2; neighbors re-checked.
double max_delta_f(double lambda) {
    const std::int64_t m0 =
        static_cast<std::int64_t>(std::floor(lambda - std::sqrt(lambda + 0.25) + 0.5));
    double best = 0.0;
    for (std::int64_t m = std::max<std::int64_t>(0, m0 - 1); m <= m0 + 1; ++m) {
        best = std::max(best, poisson_delta_f(lambda, m));
    }
    return best;
}

// Smallest (most negative) first-difference value, at floor(rho2) with
// rho2 = lambda + sqrt(lambda + 1/4) + 1/2; neighbors re-checked.
double min_delta_f(double lambda) {
    const std::int64_t u0 =
        static_cast<std::int64_t>(std::floor(lambda + std::sqrt(lambda + 0.25) + 0.5));
    double worst = 0.0;
    for (std::int64_t u = std::max<std::int64_t>(0, u0 - 1); u <= u0 + 1; ++u) {
        worst = std::min(worst, poisson_delta_f(lambda, u));
    }
    return worst;
}

}  // namespace

std::string_view to_string(NormMethod m) noexcept {
    switch (m) {
        case NormMethod::numeric: return "numeric";
        case NormMethod::exact_poisson: return "exact_poisson";
        case NormMethod::crude: return "crude";
        case NormMethod::normal_heuristic: return "normal_heuristic";
    }
    return "unknown";
}

double numeric_delta1_sup(const IntPmf& a) {
    double best = 0.0;
    for (std::int64_t k = a.min_support(); k <= a.max_support() + 1; ++k) {
        best = std::max(best, std::abs(a.at(k) - a.at(k - 1)));
    }
    return best;
}

double numeric_delta2_l1(const IntPmf& a) {
    detail::NeumaierSum total;
    for (std::int64_t k = a.min_support(); k <= a.max_support() + 2; ++k) {
        total.add(std::abs(a.at(k) - 2.0 * a.at(k - 1) + a.at(k - 2)));
    }
    return total.value();
}

double poisson_delta1_sup_exact(double lambda) {
    require_positive(lambda, "poisson_delta1_sup_exact");
    return max_delta_f(lambda);
}

double poisson_delta2_l1_exact(double lambda) {
    require_positive(lambda, "poisson_delta2_l1_exact");
    return 2.0 * (max_delta_f(lambda) - min_delta_f(lambda));
}

double poisson_delta2_l1_crude(double lambda) {
    require_positive(lambda, "poisson_delta2_l1_crude");
    return std::min(4.0, 4.0 * (-std::expm1(-3.0 * lambda)) / (3.0 * lambda));
}

double normal_heuristic_delta2(double lambda, double second_raw_severity) {
    require_positive(lambda, "normal_heuristic_delta2");
    if (!(std::isfinite(second_raw_severity) && second_raw_severity > 0.0)) {
        throw std::invalid_argument("normal_heuristic_delta2: E(W^2) must be > 0");
    }
    return 4.0 / (lambda * second_raw_severity * kSqrt2PiE);
}

SmoothnessReport numeric_norms(const IntPmf& a) {
    return {numeric_delta1_sup(a), numeric_delta2_l1(a), NormMethod::numeric};
}

SmoothnessReport exact_poisson_norms(double lambda) {
    return {poisson_delta1_sup_exact(lambda), poisson_delta2_l1_exact(lambda),
            NormMethod::exact_poisson};
}

}  // namespace cpx
