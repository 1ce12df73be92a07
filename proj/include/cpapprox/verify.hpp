#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cpapprox/pmf.hpp"

namespace cpx {

// Outcome of one exact-verification suite. Failures carry one message each;
// passing cases stay silent.
struct SuiteResult {
    std::string name;
    int cases = 0;
    int failures = 0;
    std::vector<std::string> messages;

    bool passed() const noexcept { return failures == 0; }
};

// Randomized exact checks of the coupling/smoothing inequalities. Seeds are
// caller-fixed so every run reproduces; per-case seeds derive from `seed`.
SuiteResult verify_smoothing_suite(std::uint64_t seed, int cases = 200);
SuiteResult verify_product_coupling_suite(std::uint64_t seed, int cases = 200);
SuiteResult verify_shift_suite(std::uint64_t seed, int cases = 200);
SuiteResult verify_zeta2_cp_identity_suite(std::uint64_t seed, int cases = 20);
SuiteResult verify_zeta2_coupling_suite();

// Exact run-count distance vs the closed-form bounds over the desk-scale grid
// n in {20, 60, 120, 200} (clipped to `cap`), k in {2..5}, p in {0.05..0.3}.
SuiteResult verify_runs_dominance_suite(std::int64_t cap = 500, double eps = kDefaultEps);

// Exact convolution-oracle distances vs the independent-summand bounds on
// randomly sampled profiles.
SuiteResult verify_bernoulli_dominance_suite(std::uint64_t seed, int cases = 100);
SuiteResult verify_cp_dominance_suite(std::uint64_t seed, int cases = 50);

// Numeric compound norms and their normal-approximation values for
// lambda in {1, 5, 10, 100} x p in {0.2, 0.5, 0.8}, checked against the
// reference values.
struct Table1Row {
    double lambda;
    double p;
    double norm;
    double heuristic;
};
std::vector<Table1Row> table1(double eps = kDefaultEps);
SuiteResult verify_table1_suite(double eps = kDefaultEps);

std::vector<SuiteResult> verify_lemma_suites(std::uint64_t seed);
std::vector<SuiteResult> verify_all(std::uint64_t seed, std::int64_t cap = 500,
                                    double eps = kDefaultEps);

}  // namespace cpx
