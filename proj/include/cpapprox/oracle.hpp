#pragma once

#include <cstdint>
#include <vector>

#include "cpapprox/bounds.hpp"
#include "cpapprox/pmf.hpp"
#include "cpapprox/runs.hpp"

namespace cpx {

// Explicit joint law of a pair (X, Z) of non-negative integer variables; the
// desk-scale input to the second-order coupling check.
struct JointPmf {
    struct Atom {
        std::int64_t x;
        std::int64_t z;
        double prob;
    };
    std::vector<Atom> atoms;

    void validate() const;  // probs >= 0 summing to 1, points >= 0
    IntPmf marginal_x() const;
    IntPmf marginal_z() const;
    double mean_x() const;
    double mean_z() const;
    double mean_xz() const;
};

// Exact run-count law by dynamic programming over (success streak capped at k,
// accumulated count). Exhaustive: deficit 0.
IntPmf exact_run_count_pmf(const RunsConfig& cfg, std::int64_t cap = 500);

// Exact run-count law by summing p^{#successes} q^{#failures} over all 2^n
// outcome strings (n <= 22). Independent cross-check of the DP.
IntPmf enumerate_run_count_pmf(const RunsConfig& cfg);

struct InequalityCheck {
    double lhs;
    double rhs;
    bool holds;
};

// d_TV(X+Z, Y+Z) <= 1/2 ||second difference of f_Z||_1 * zeta2(X, Y)
// for equal-mean X, Y and independent Z.
InequalityCheck check_smoothing_inequality(const IntPmf& x, const IntPmf& y, const IntPmf& z);

// |d_TV(Z+X, Z+Y) - d_TV(W+X, W+Y)| <= 2 d_TV(X, Y) d_TV(Z, W)
// for (X, Y) independent of (Z, W); independence is structural here since the
// check convolves marginals.
InequalityCheck check_product_coupling(const IntPmf& x, const IntPmf& y, const IntPmf& z,
                                       const IntPmf& w);

// d_TV(X, Y) <= (1 - 2 P(W != 0))^{-1} d_TV(X+W, Y+W) for P(W != 0) < 1/2.
InequalityCheck check_shift_inequality(const IntPmf& x, const IntPmf& y, const IntPmf& w);

// Exact identity: zeta2(law of sum, CP(lambda, mixture)) == 1/2 sum (E X_i)^2
// for independent non-negative integer summands. holds means |lhs - rhs| is
// within error bars + 1e-9.
InequalityCheck check_zeta2_cp_identity(const IndepProfile& profile);

// Second-order coupling check on a dependent pair: with (X, Z) jointly
// distributed and each unit lifted by an i.i.d. severity draw,
//   zeta2(L(X' + Z'), L(Z' + independent copy of X')) <= E(S)^2 (E(XZ) + EX EZ).
InequalityCheck check_zeta2_coupling(const JointPmf& joint, const IntPmf& severity);

}  // namespace cpx
