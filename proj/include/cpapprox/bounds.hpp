#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cpapprox/pmf.hpp"
#include "cpapprox/smoothness.hpp"

namespace cpx {

inline constexpr double kLog2 = 0.6931471805599453;

// Per-index success probabilities of independent Bernoulli summands. The
// hypothesis p_i < log 2 is checked at evaluation time, not on construction;
// violating profiles still evaluate but yield valid = false reports.
struct BernoulliProfile {
    std::vector<double> ps;
};

// Independent integer-valued summands: p_i = P(X_i != 0), sq_means holds
// (E X_i)^2, severities are the conditional laws of X_i given X_i != 0.
struct IndepProfile {
    std::vector<double> ps;
    std::vector<double> sq_means;
    std::vector<IntPmf> severities;

    std::size_t n() const noexcept { return ps.size(); }
    // Shape/range checks plus consistency (E X_i)^2 == (p_i mean(G_i))^2
    // within 1e-9. Throws std::invalid_argument.
    void validate() const;
    double lambda() const;           // sum of p_i
    IntPmf compounding_mixture() const;  // F = sum (p_i / lambda) G_i
};

// Sparse (i, j) -> value store for windowed pairwise moments, 1-based indices
// with i > j. Lookups outside the stored set (including j < 1) return 0.
class WindowedMoments {
public:
    void set(int i, int j, double value);
    double get(int i, int j) const noexcept;
    const std::map<std::pair<int, int>, double>& entries() const noexcept { return m_; }

private:
    std::map<std::pair<int, int>, double> m_;
};

// Moment-level description of a k-dependent sequence X_1..X_n: marginals plus
// windowed pairwise moments. Indices below 1 are identically-zero variables.
struct LocalDepProfile {
    int k = 1;  // dependence range: X_i independent of X_j when |i - j| >= k
    std::vector<double> ps;        // P(X_i != 0)
    std::vector<double> means;     // E X_i
    std::vector<double> sq_means;  // (E X_i)^2
    WindowedMoments cross_moments;  // E(X_i X_j)
    WindowedMoments joint_nonzero;  // P(X_i != 0, X_j != 0)
    WindowedMoments covariances;    // Cov(X_i, X_j)
    std::vector<IntPmf> severities;

    int n() const noexcept { return static_cast<int>(ps.size()); }
    double p(int i) const noexcept {  // 1-based, 0 outside 1..n
        return (i >= 1 && i <= n()) ? ps[static_cast<std::size_t>(i - 1)] : 0.0;
    }
    double mean(int i) const noexcept {
        return (i >= 1 && i <= n()) ? means[static_cast<std::size_t>(i - 1)] : 0.0;
    }
    // max_i sum_{j=i-3k+3}^{i} p_j  (the small-probability hypothesis)
    double m_hypothesis() const noexcept;
    void validate() const;
    double lambda() const;
    IntPmf compounding_mixture() const;
};

// A bound value decomposed into its named components. total = c_term +
// smooth_term. When a hypothesis fails the formula value is still reported,
// valid flips to false and a note explains why.
struct BoundReport {
    double total = 0.0;
    double c_term = 0.0;
    double smooth_term = 0.0;
    double norm_used = 0.0;
    NormMethod norm_method = NormMethod::numeric;
    double lambda = 0.0;
    bool valid = true;
    std::vector<std::string> notes;
};

// Independent integer summands vs CP(lambda, F):
//   (sum p_i^2)^2 + norm/4 * sum (E X_i)^2 / (1 - 2(1 - e^{-p_i})).
// `norm` is the smoothness factor of the approximating CP law; the caller
// picks how to obtain it (numeric, crude, ...).
BoundReport ub_cp_independent(const IndepProfile& profile, double norm,
                              NormMethod method = NormMethod::numeric);

// Independent Bernoulli summands vs Po(sum p_i):
//   (sum p_i^2)^2 + norm/4 * sum p_i^2 / (1 - 2(1 - e^{-p_i})).
BoundReport ub_po_bernoulli(const BernoulliProfile& profile, double norm,
                            NormMethod method = NormMethod::exact_poisson);

// i.i.d. Bernoulli refinement: replaces the (sum p^2)^2 term by
//   (2p^2/3)(log(3np/(1-3p)) + 1) + 2p^3,
// valid for p < 1/3 and np >= 1/3 + p.
BoundReport ub_po_iid_refined(std::int64_t n, double p);

// k-dependent summands, moment form:
//   C_n + norm / (2(1 - 2(1 - e^{-m}))) *
//         sum_i [ sum_{j=i-k+1}^{i-1} (E(X_i X_j) + E X_i E X_j) + (E X_i)^2 / 2 ].
BoundReport ub_cp_kdep_moments(const LocalDepProfile& profile, double norm,
                               NormMethod method = NormMethod::numeric);

// Quadrant-dependent variant: |Cov(X_i, X_j)| replaces E(X_i X_j) + E X_i E X_j
// in the smooth term, and sum_t |Cov(X_j, X_t)| + (E X_j)^2 / 2 replaces the
// inner sums of C_n. The PQD/NQD hypothesis is declared by the caller, not
// verified here.
BoundReport ub_cp_kdep_quadrant(const LocalDepProfile& profile, double norm,
                                NormMethod method = NormMethod::numeric);

// Master k-dependent bound with caller-supplied per-index ingredients:
// zeta_terms[i] are the window second-order distances, dtv_prefix_terms[i] the
// distances between prefix sums and their compound-Poisson counterparts, and
// window_joint[i] = P(X_{i-k+1..i-1} != 0, X_i != 0).
struct KdepGeneralInputs {
    std::vector<double> ps;
    int k = 1;
    std::vector<double> zeta_terms;
    std::vector<double> dtv_prefix_terms;
    std::vector<double> window_joint;
};
BoundReport ub_cp_kdep_general(const KdepGeneralInputs& in, double norm,
                               NormMethod method = NormMethod::numeric);

}  // namespace cpx
