#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cpapprox/bounds.hpp"
#include "cpapprox/metrics.hpp"
#include "cpapprox/oracle.hpp"
#include "cpapprox/pmf.hpp"
#include "cpapprox/runs.hpp"
#include "cpapprox/smoothness.hpp"

using cpx::BernoulliProfile;
using cpx::BoundReport;
using cpx::IndepProfile;
using cpx::IntPmf;
using cpx::LocalDepProfile;

namespace {

IndepProfile uniform_bernoulli_profile(std::size_t n, double p) {
    IndepProfile profile;
    profile.ps.assign(n, p);
    profile.sq_means.assign(n, p * p);
    profile.severities.assign(n, IntPmf::point_mass(1));
    return profile;
}

}  // namespace

TEST_CASE("ub_cp_independent") {
    SUBCASE("degenerate all-zero profile") {
        IndepProfile profile;
        profile.ps.assign(4, 0.0);
        profile.sq_means.assign(4, 0.0);
        profile.severities.assign(4, IntPmf::point_mass(1));
        const BoundReport r = cpx::ub_cp_independent(profile, 1.0);
        CHECK(r.total == 0.0);
        CHECK(r.valid);
    }

    SUBCASE("ten unit-severity summands, closed-form value") {
        const IndepProfile profile = uniform_bernoulli_profile(10, 0.1);
        const double norm = 3.0 * std::exp(-1.0);
        const BoundReport r = cpx::ub_cp_independent(profile, norm);
        CHECK(std::abs(r.total - 0.04407659082220436) <= 1e-12);
        CHECK(std::abs(r.c_term - 0.01) <= 1e-15);
        CHECK(std::abs(r.total - (r.c_term + r.smooth_term)) <= 1e-12);
        CHECK(r.lambda == doctest::Approx(1.0));

        // the exact distance it certifies
        const std::vector<double> ps(10, 0.1);
        const cpx::MetricValue d = cpx::tv_distance(cpx::poisson_binomial_pmf(ps),
                                                    cpx::poisson_pmf(1.0, 1e-14));
        CHECK(d.value <= r.total);
    }

    SUBCASE("inconsistent sq_means rejected") {
        IndepProfile profile = uniform_bernoulli_profile(3, 0.1);
        profile.sq_means[1] = 0.5;
        CHECK_THROWS_AS(cpx::ub_cp_independent(profile, 1.0), std::invalid_argument);
    }

    SUBCASE("hypothesis violation flags the report") {
        const IndepProfile profile = uniform_bernoulli_profile(2, 0.7);
        const BoundReport r = cpx::ub_cp_independent(profile, 1.0);
        CHECK_FALSE(r.valid);
        CHECK_FALSE(r.notes.empty());
    }
}

TEST_CASE("ub_po_bernoulli") {
    SUBCASE("single summand closed form and dominance") {
        const BernoulliProfile profile{{0.1}};
        const double norm = cpx::poisson_delta2_l1_exact(0.1);
        CHECK(std::abs(norm - 3.4383821885366466) <= 1e-14);
        const BoundReport r = cpx::ub_po_bernoulli(profile, norm);
        CHECK(std::abs(r.total - 0.010716552581829386) <= 1e-12);
        CHECK(r.total >= 0.009516258196404049);  // exact d_TV(Bernoulli, Poisson)
    }

    SUBCASE("heterogeneous profile dominates the convolution oracle") {
        const BernoulliProfile profile{{0.05, 0.1, 0.15}};
        const double lambda = 0.3;
        const BoundReport r =
            cpx::ub_po_bernoulli(profile, cpx::poisson_delta2_l1_exact(lambda));
        const cpx::MetricValue d = cpx::tv_distance(cpx::poisson_binomial_pmf(profile.ps),
                                                    cpx::poisson_pmf(lambda, 1e-14));
        CHECK(d.value <= r.total);
    }

    SUBCASE("p above log 2 flips valid") {
        const BoundReport r = cpx::ub_po_bernoulli(BernoulliProfile{{0.7}}, 1.0);
        CHECK_FALSE(r.valid);
    }
}

TEST_CASE("ub_po_iid_refined") {
    SUBCASE("closed-form components") {
        const BoundReport r = cpx::ub_po_iid_refined(100, 0.05);
        CHECK(r.valid);
        CHECK(std::abs(r.c_term - 0.0067009485509999765) <= 1e-15);
        CHECK(std::abs(r.smooth_term - 0.013563984609504726) <= 1e-12);
    }

    SUBCASE("refined first term beats the squared sum") {
        const BoundReport r = cpx::ub_po_iid_refined(1000, 0.05);
        const double squared = std::pow(1000 * 0.05 * 0.05, 2.0);
        CHECK(r.c_term < squared);
    }

    SUBCASE("preconditions gate validity") {
        CHECK_FALSE(cpx::ub_po_iid_refined(100, 0.4).valid);   // p >= 1/3
        CHECK_FALSE(cpx::ub_po_iid_refined(2, 0.05).valid);    // lambda too small
    }
}

TEST_CASE("WindowedMoments lookup conventions") {
    cpx::WindowedMoments wm;
    wm.set(5, 3, 0.25);
    CHECK(wm.get(5, 3) == 0.25);
    CHECK(wm.get(5, 4) == 0.0);   // absent
    CHECK(wm.get(5, 0) == 0.0);   // below the first index
    CHECK(wm.get(5, -2) == 0.0);
    CHECK_THROWS_AS(wm.set(3, 3, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(wm.set(3, 0, 0.1), std::invalid_argument);
}

TEST_CASE("ub_cp_kdep_moments") {
    SUBCASE("all-zero profile") {
        LocalDepProfile profile;
        profile.k = 2;
        profile.ps.assign(5, 0.0);
        profile.means.assign(5, 0.0);
        profile.sq_means.assign(5, 0.0);
        const BoundReport r = cpx::ub_cp_kdep_moments(profile, 1.0);
        CHECK(r.total == 0.0);
        CHECK(r.valid);
    }

    SUBCASE("independent reduction at range one") {
        LocalDepProfile profile;
        profile.k = 1;
        profile.ps = {0.1, 0.05, 0.2};
        profile.means = {0.1, 0.05, 0.2};
        profile.sq_means = {0.01, 0.0025, 0.04};
        const double norm = 0.5;
        const BoundReport r = cpx::ub_cp_kdep_moments(profile, norm);
        const double m = 0.2;  // windows are empty, m = max p_i
        const double expected_smooth =
            norm / (2.0 * (2.0 * std::exp(-m) - 1.0)) * 0.5 * (0.01 + 0.0025 + 0.04);
        CHECK(std::abs(r.smooth_term - expected_smooth) <= 1e-15);
    }

    SUBCASE("run-indicator profile, frozen closed-form value") {
        const cpx::LocalDepProfile profile = cpx::run_indicator_profile({60, 3, 0.1});
        const BoundReport r = cpx::ub_cp_kdep_moments(profile, 0.1);
        CHECK(std::abs(r.c_term - 0.00017587170000000007) <= 1e-15);
        CHECK(std::abs(r.smooth_term - 0.00032462893532780434) <= 1e-15);
    }

    SUBCASE("run-indicator profile dominates the exact distance (Poisson target)") {
        const cpx::RunsConfig cfg{60, 3, 0.1};
        const cpx::LocalDepProfile profile = cpx::run_indicator_profile(cfg);
        const double lambda = cfg.lambda_po();
        const double norm = cpx::poisson_delta2_l1_exact(lambda);
        const BoundReport r =
            cpx::ub_cp_kdep_moments(profile, norm, cpx::NormMethod::exact_poisson);
        CHECK(r.valid);
        const cpx::MetricValue d = cpx::tv_distance(cpx::exact_run_count_pmf(cfg),
                                                    cpx::poisson_pmf(lambda, 1e-13));
        CHECK(d.value - d.error_bar <= r.total);
    }

    SUBCASE("hypothesis gating") {
        LocalDepProfile profile;
        profile.k = 2;
        profile.ps.assign(6, 0.3);  // m = 4 * 0.3 > log 2
        profile.means.assign(6, 0.3);
        profile.sq_means.assign(6, 0.09);
        CHECK_FALSE(cpx::ub_cp_kdep_moments(profile, 1.0).valid);
    }
}

TEST_CASE("ub_cp_kdep_quadrant") {
    SUBCASE("zero covariances at range one match the moment form") {
        LocalDepProfile profile;
        profile.k = 1;
        profile.ps = {0.1, 0.2};
        profile.means = {0.1, 0.2};
        profile.sq_means = {0.01, 0.04};
        const BoundReport a = cpx::ub_cp_kdep_moments(profile, 0.7);
        const BoundReport b = cpx::ub_cp_kdep_quadrant(profile, 0.7);
        CHECK(std::abs(a.smooth_term - b.smooth_term) <= 1e-15);
    }

    SUBCASE("associated run indicators: quadrant form is no worse") {
        const cpx::LocalDepProfile profile = cpx::run_indicator_profile({60, 3, 0.1});
        const BoundReport a = cpx::ub_cp_kdep_moments(profile, 0.1);
        const BoundReport b = cpx::ub_cp_kdep_quadrant(profile, 0.1);
        CHECK(b.total <= a.total + 1e-15);
        CHECK(std::abs(b.c_term - 0.00017137170000000005) <= 1e-15);
        CHECK(std::abs(b.smooth_term - 0.00031316905726093744) <= 1e-15);
    }

    SUBCASE("declumped profile, frozen closed-form value") {
        const cpx::LocalDepProfile profile = cpx::declumped_run_profile({200, 3, 0.2});
        const BoundReport r = cpx::ub_cp_kdep_quadrant(profile, 0.1);
        CHECK(std::abs(r.c_term - 0.01668342284644518) <= 1e-12);
        CHECK(std::abs(r.smooth_term - 0.0028574521543763822) <= 1e-14);
        // the negative-dependence form undercuts the moment form here
        const BoundReport a = cpx::ub_cp_kdep_moments(profile, 0.1);
        CHECK(r.total <= a.total);
    }
}

TEST_CASE("bounds are monotone in the norm argument") {
    const cpx::LocalDepProfile profile = cpx::run_indicator_profile({40, 2, 0.15});
    CHECK(cpx::ub_cp_kdep_moments(profile, 0.2).total <=
          cpx::ub_cp_kdep_moments(profile, 0.8).total);
    CHECK(cpx::ub_cp_kdep_quadrant(profile, 0.2).total <=
          cpx::ub_cp_kdep_quadrant(profile, 0.8).total);
    const BernoulliProfile bern{{0.1, 0.2}};
    CHECK(cpx::ub_po_bernoulli(bern, 0.5).total <= cpx::ub_po_bernoulli(bern, 2.0).total);
}

namespace {

// Exact law of the windowed indicator sum sum_{j=lo..hi} X_j with
// X_j = Z_j ... Z_{j+k-1}, by enumeration over the trials it touches.
IntPmf window_sum_law(int lo, int hi, int k, double p) {
    lo = std::max(1, lo);
    if (lo > hi) return IntPmf::point_mass(0);
    const int zlo = lo;
    const int zhi = hi + k - 1;
    const int bits = zhi - zlo + 1;
    std::vector<double> buckets(static_cast<std::size_t>(hi - lo + 2), 0.0);
    for (std::uint64_t mask = 0; mask < (1ULL << bits); ++mask) {
        int ones = 0;
        for (int b = 0; b < bits; ++b) ones += (mask >> b) & 1ULL;
        int count = 0;
        for (int j = lo; j <= hi; ++j) {
            bool all = true;
            for (int t = j; t < j + k; ++t) {
                if (!((mask >> (t - zlo)) & 1ULL)) {
                    all = false;
                    break;
                }
            }
            count += all ? 1 : 0;
        }
        buckets[static_cast<std::size_t>(count)] +=
            std::pow(p, ones) * std::pow(1.0 - p, bits - ones);
    }
    return IntPmf(0, std::move(buckets));
}

// P(at least one of X_{i-k+1..i-1} is nonzero and X_i is nonzero)
double window_joint_probability(int i, int k, double p) {
    const int lo = std::max(1, i - k + 1);
    if (lo > i - 1) return 0.0;
    const int zlo = lo;
    const int zhi = i + k - 1;
    const int bits = zhi - zlo + 1;
    double total = 0.0;
    for (std::uint64_t mask = 0; mask < (1ULL << bits); ++mask) {
        bool xi = true;
        for (int t = i; t < i + k; ++t) {
            if (!((mask >> (t - zlo)) & 1ULL)) {
                xi = false;
                break;
            }
        }
        if (!xi) continue;
        bool any = false;
        for (int j = lo; j <= i - 1 && !any; ++j) {
            bool all = true;
            for (int t = j; t < j + k; ++t) {
                if (!((mask >> (t - zlo)) & 1ULL)) {
                    all = false;
                    break;
                }
            }
            any = all;
        }
        if (!any) continue;
        int ones = 0;
        for (int b = 0; b < bits; ++b) ones += (mask >> b) & 1ULL;
        total += std::pow(p, ones) * std::pow(1.0 - p, bits - ones);
    }
    return total;
}

}  // namespace

TEST_CASE("ub_cp_kdep_general") {
    SUBCASE("all-zero inputs") {
        cpx::KdepGeneralInputs in;
        in.k = 2;
        in.ps.assign(6, 0.0);
        in.zeta_terms.assign(6, 0.0);
        in.dtv_prefix_terms.assign(6, 0.0);
        in.window_joint.assign(6, 0.0);
        CHECK(cpx::ub_cp_kdep_general(in, 1.0).total == 0.0);
    }

    SUBCASE("length mismatch rejected") {
        cpx::KdepGeneralInputs in;
        in.k = 2;
        in.ps.assign(6, 0.0);
        in.zeta_terms.assign(5, 0.0);
        in.dtv_prefix_terms.assign(6, 0.0);
        in.window_joint.assign(6, 0.0);
        CHECK_THROWS_AS(cpx::ub_cp_kdep_general(in, 1.0), std::invalid_argument);
    }

    SUBCASE("window moment substitution reproduces the moment-form smooth term") {
        const cpx::RunsConfig cfg{30, 2, 0.15};
        const cpx::LocalDepProfile profile = cpx::run_indicator_profile(cfg);
        cpx::KdepGeneralInputs in;
        in.k = profile.k;
        in.ps = profile.ps;
        in.dtv_prefix_terms.assign(profile.ps.size(), 0.0);
        in.window_joint.assign(profile.ps.size(), 0.0);
        for (int i = 1; i <= profile.n(); ++i) {
            double z = 0.5 * profile.sq_means[static_cast<std::size_t>(i - 1)];
            for (int j = std::max(1, i - profile.k + 1); j <= i - 1; ++j) {
                z += profile.cross_moments.get(i, j) + profile.mean(i) * profile.mean(j);
            }
            in.zeta_terms.push_back(z);
        }
        const BoundReport general = cpx::ub_cp_kdep_general(in, 0.3);
        const BoundReport momentful = cpx::ub_cp_kdep_moments(profile, 0.3);
        CHECK(std::abs(general.smooth_term - momentful.smooth_term) <= 1e-15);
    }

    SUBCASE("exact window ingredients give a bound at most the moment form") {
        const cpx::RunsConfig cfg{25, 2, 0.15};
        const int n = static_cast<int>(cfg.windows());
        const int k = static_cast<int>(cfg.k);
        const double pk = cfg.p_pow_k();
        const IntPmf unit_cp = cpx::compound_poisson_pmf({pk, IntPmf::point_mass(1)}, 1e-14);

        cpx::KdepGeneralInputs in;
        in.k = k;
        in.ps.assign(static_cast<std::size_t>(n), pk);
        for (int i = 1; i <= n; ++i) {
            const IntPmf with_i = window_sum_law(i - 2 * k + 2, i, k, cfg.p);
            const IntPmf without_i =
                convolve(window_sum_law(i - 2 * k + 2, i - 1, k, cfg.p), unit_cp);
            in.zeta_terms.push_back(cpx::zeta2(with_i, without_i).value);

            const int t = i - 3 * k + 2;
            if (t >= 1) {
                const IntPmf prefix = cpx::exact_run_count_pmf({t + k - 1, cfg.k, cfg.p});
                in.dtv_prefix_terms.push_back(
                    cpx::tv_distance(prefix,
                                     cpx::poisson_pmf(static_cast<double>(t) * pk, 1e-13))
                        .value);
            } else {
                in.dtv_prefix_terms.push_back(0.0);
            }
            in.window_joint.push_back(window_joint_probability(i, k, cfg.p));
        }

        const double norm = 0.25;
        const BoundReport general = cpx::ub_cp_kdep_general(in, norm);
        const BoundReport momentful =
            cpx::ub_cp_kdep_moments(cpx::run_indicator_profile(cfg), norm);
        CHECK(general.total <= momentful.total + 1e-12);

        // and it still certifies the exact distance (with the matching norm)
        const double lambda = cfg.lambda_po();
        const double po_norm = cpx::poisson_delta2_l1_exact(lambda);
        const BoundReport certified = cpx::ub_cp_kdep_general(in, po_norm);
        const cpx::MetricValue d = cpx::tv_distance(cpx::exact_run_count_pmf(cfg),
                                                    cpx::poisson_pmf(lambda, 1e-13));
        CHECK(d.value - d.error_bar <= certified.total);
    }
}
