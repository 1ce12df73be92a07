#pragma once

#include "cpapprox/pmf.hpp"

namespace cpx {

// A metric result together with a rigorous bound on the error induced by the
// operands' truncation deficits.
struct MetricValue {
    double value;
    double error_bar;
};

// Total variation distance: half the L1 distance over the union support.
// Internally cross-checked against the coupling identity
//   value == 1 - sum_k min(a(k), b(k)) - (deficit correction)
// on every call; a mismatch beyond 1e-12 throws std::logic_error.
MetricValue tv_distance(const IntPmf& a, const IntPmf& b);

// Second-order ideal metric sum_k |sum_{u>=k} (F_a(u) - F_b(u))|, defined for
// equal-mean laws. Throws std::invalid_argument when the (truncated) means
// differ by more than mean_tol. Contributions beyond the union support are
// bounded by deficit x support-width and folded into error_bar.
MetricValue zeta2(const IntPmf& a, const IntPmf& b, double mean_tol = 1e-9);

}  // namespace cpx
