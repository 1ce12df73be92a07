#pragma once

#include <string_view>

#include "cpapprox/pmf.hpp"

namespace cpx {

enum class NormMethod { numeric, exact_poisson, crude, normal_heuristic };

std::string_view to_string(NormMethod m) noexcept;

// The two smoothness factors of an approximating pmf f: the sup norm of its
// first backward difference and the L1 norm of its second backward difference.
struct SmoothnessReport {
    double delta1_sup;
    double delta2_l1;
    NormMethod method;
};

// max_k |f(k) - f(k-1)|, scanned over the support extended by one on each side.
double numeric_delta1_sup(const IntPmf& a);

// sum_k |f(k) - 2 f(k-1) + f(k-2)|, over the support extended by two.
double numeric_delta2_l1(const IntPmf& a);

// Closed forms for the Poisson law, evaluated in log space. The extremizing
// indices floor(lambda -/+ sqrt(lambda + 1/4) + 1/2) are re-derived from the
// defining extremization over neighboring candidates, so floating-point floors
// at integer boundaries cannot pick the wrong index.
double poisson_delta1_sup_exact(double lambda);
double poisson_delta2_l1_exact(double lambda);

// min(4, 4 (1 - e^{-3 lambda}) / (3 lambda)); always dominates the exact value.
double poisson_delta2_l1_crude(double lambda);

// 4 / (lambda E(W^2) sqrt(2 pi e)) -- the normal-approximation heuristic for
// the second-difference norm of a compound Poisson law. Valid only when that
// law is close to normal; never substituted into a bound automatically.
double normal_heuristic_delta2(double lambda, double second_raw_severity);

SmoothnessReport numeric_norms(const IntPmf& a);
SmoothnessReport exact_poisson_norms(double lambda);

}  // namespace cpx
