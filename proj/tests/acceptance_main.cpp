// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria run against exact oracles at desk scale with pinned
// tolerances.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "cpapprox/bounds.hpp"
#include "cpapprox/metrics.hpp"
#include "cpapprox/oracle.hpp"
#include "cpapprox/pmf.hpp"
#include "cpapprox/runs.hpp"
#include "cpapprox/smoothness.hpp"
#include "cpapprox/verify.hpp"
#include "support.hpp"

namespace {

constexpr std::uint64_t kSeed = 20081122;

int g_failures = 0;

void report(int criterion, const std::string& what, bool passed, double seconds,
            const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s (%.1fs)%s%s\n", passed ? "PASS" : "FAIL", criterion,
                what.c_str(), seconds, detail.empty() ? "" : " -- ", detail.c_str());
    if (!passed) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string suite_detail(const cpx::SuiteResult& r) {
    std::string out = r.name + ": " + std::to_string(r.cases - r.failures) + "/" +
                      std::to_string(r.cases);
    if (!r.messages.empty()) out += " (" + r.messages.front() + ")";
    return out;
}

void criterion1_table1() {
    const auto start = std::chrono::steady_clock::now();
    const cpx::SuiteResult r = cpx::verify_table1_suite(1e-12);
    const double elapsed = seconds_since(start);
    report(1, "norm table reproduction (12 norms, 12 heuristics)",
           r.passed() && elapsed <= 60.0, elapsed, suite_detail(r));
}

void criterion2_poisson_norms() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (const double lambda : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0}) {
        const cpx::IntPmf po = cpx::poisson_pmf(lambda, 1e-14);
        const double d1_exact = cpx::poisson_delta1_sup_exact(lambda);
        const double d2_exact = cpx::poisson_delta2_l1_exact(lambda);
        if (std::abs(d1_exact - cpx::numeric_delta1_sup(po)) > 1e-10 ||
            std::abs(d2_exact - cpx::numeric_delta2_l1(po)) > 1e-10) {
            ok = false;
            detail = "exact/numeric mismatch at lambda " + std::to_string(lambda);
        }
        if (d2_exact > 4.0 * d1_exact + 1e-12) {
            ok = false;
            detail = "second norm above 4x first at lambda " + std::to_string(lambda);
        }
    }
    for (const double lambda : {0.5, 1.0, 2.0}) {
        if (std::abs(cpx::poisson_delta1_sup_exact(lambda) - std::exp(-lambda)) > 1e-15) {
            ok = false;
            detail = "small-rate closed form failed";
        }
    }
    const double scaled = 1e4 * cpx::poisson_delta2_l1_exact(1e4);
    if (std::abs(scaled - 0.967880) > 0.05 * 0.967880) {
        ok = false;
        detail = "large-rate asymptote off: " + std::to_string(scaled);
    }
    report(2, "Poisson norm closed forms vs numeric evaluation", ok, seconds_since(start),
           detail);
}

void criterion3_independent_dominance() {
    const auto start = std::chrono::steady_clock::now();
    const cpx::SuiteResult bern = cpx::verify_bernoulli_dominance_suite(kSeed, 100);
    const cpx::SuiteResult comp = cpx::verify_cp_dominance_suite(kSeed, 50);
    const double elapsed = seconds_since(start);
    report(3, "independent-summand bounds dominate the exact distances",
           bern.passed() && comp.passed() && elapsed <= 30.0, elapsed,
           suite_detail(bern) + "; " + suite_detail(comp));
}

void criterion4_runs_dominance() {
    const auto start = std::chrono::steady_clock::now();
    const cpx::SuiteResult r = cpx::verify_runs_dominance_suite(500, 1e-12);
    const double elapsed = seconds_since(start);
    report(4, "run-count bounds dominate the exact distances on the grid",
           r.passed() && elapsed <= 300.0, elapsed, suite_detail(r));
}

void criterion5_lemma_suites() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (const cpx::SuiteResult& r : cpx::verify_lemma_suites(kSeed)) {
        if (!r.passed()) {
            ok = false;
            detail += suite_detail(r) + "; ";
        }
    }
    report(5, "coupling/smoothing inequality suites (randomized, fixed seed)", ok,
           seconds_since(start), detail);
}

void criterion6_oracle_self_consistency() {
    const auto start = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;

    // dynamic program vs full enumeration
    for (const std::int64_t n : {4, 8, 12, 16, 20}) {
        for (const std::int64_t k : {1, 2, 3, 5}) {
            if (k > n) continue;
            for (const double p : {0.2, 0.5, 0.8}) {
                const cpx::RunsConfig cfg{n, k, p};
                if (cpxtest::max_abs_diff(cpx::exact_run_count_pmf(cfg),
                                          cpx::enumerate_run_count_pmf(cfg)) > 1e-14) {
                    ok = false;
                    detail = "run-count oracles disagree at n=" + std::to_string(n);
                }
            }
        }
    }

    // recursion vs mixture-of-convolutions on 20 small severities
    cpx::detail::SplitMix64 rng(kSeed);
    for (int trial = 0; trial < 20; ++trial) {
        const double lambda = rng.uniform(0.1, 10.0);
        const cpx::IntPmf severity =
            cpxtest::random_pmf(rng, 1, 1 + static_cast<std::int64_t>(rng.below(9)));
        const cpx::IntPmf recursing = cpx::compound_poisson_pmf({lambda, severity}, 1e-13);
        const cpx::IntPmf mixed = cpxtest::cp_by_mixture_of_convolutions(lambda, severity);
        if (cpxtest::max_abs_diff(recursing, mixed) > 1e-10) {
            ok = false;
            detail = "compound recursion vs mixture mismatch";
        }
    }

    // the half-L1 / coupling-overlap identity is asserted inside every
    // tv_distance call; exercise it across random inputs
    try {
        for (int trial = 0; trial < 200; ++trial) {
            const cpx::IntPmf a = cpxtest::random_pmf(rng, -3, 6);
            const cpx::IntPmf b = cpxtest::random_pmf(rng, 0, 8);
            (void)cpx::tv_distance(a, b);
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("tv identity violated: ") + e.what();
    }

    report(6, "oracle self-consistency (run counts, compound recursion, tv identity)", ok,
           seconds_since(start), detail);
}

void criterion7_asymptotic_trend() {
    const auto start = std::chrono::steady_clock::now();
    // The large-rate rate claims are not finitely checkable; the documented
    // stand-in is the scaled norm settling onto 4 / sqrt(2 pi e). The sequence
    // oscillates around the limit (integer extremizing indices), so the check
    // is decay of the deviation across decades, not strict monotonicity.
    const double l2 = 1e2 * cpx::poisson_delta2_l1_exact(1e2);
    const double l3 = 1e3 * cpx::poisson_delta2_l1_exact(1e3);
    const double l4 = 1e4 * cpx::poisson_delta2_l1_exact(1e4);
    const double limit = 4.0 / std::sqrt(2.0 * 3.14159265358979323846 * std::exp(1.0));
    const bool ok = l2 > l3 && std::abs(l2 - limit) > std::abs(l3 - limit) &&
                    std::abs(l2 - limit) > std::abs(l4 - limit) &&
                    std::abs(l4 - limit) / limit < 0.05;
    char detail[128];
    std::snprintf(detail, sizeof(detail), "scaled norms %.6f, %.6f, %.6f vs limit %.6f", l2, l3,
                  l4, limit);
    report(7, "documented trend check in lieu of asymptotic rate claims", ok,
           seconds_since(start), detail);
}

}  // namespace

int main() {
    criterion1_table1();
    criterion2_poisson_norms();
    criterion3_independent_dominance();
    criterion4_runs_dominance();
    criterion5_lemma_suites();
    criterion6_oracle_self_consistency();
    criterion7_asymptotic_trend();

    if (g_failures > 0) {
        std::printf("%d criterion(s) FAILED\n", g_failures);
        return 1;
    }
    std::printf("all 7 criteria passed\n");
    return 0;
}
