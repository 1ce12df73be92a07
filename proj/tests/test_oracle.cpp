#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cpapprox/metrics.hpp"
#include "cpapprox/oracle.hpp"
#include "cpapprox/pmf.hpp"
#include "cpapprox/verify.hpp"

using cpx::IntPmf;
using cpx::JointPmf;
using cpx::RunsConfig;

TEST_CASE("exact_run_count_pmf small cases") {
    const IntPmf single = cpx::exact_run_count_pmf({4, 4, 0.3});
    CHECK(std::abs(single.at(0) - (1.0 - std::pow(0.3, 4.0))) <= 1e-15);
    CHECK(std::abs(single.at(1) - std::pow(0.3, 4.0)) <= 1e-15);

    const IntPmf three = cpx::exact_run_count_pmf({3, 2, 0.5});
    CHECK(std::abs(three.at(0) - 5.0 / 8.0) <= 1e-15);
    CHECK(std::abs(three.at(1) - 2.0 / 8.0) <= 1e-15);
    CHECK(std::abs(three.at(2) - 1.0 / 8.0) <= 1e-15);

    CHECK_THROWS_AS(cpx::exact_run_count_pmf({600, 2, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(cpx::exact_run_count_pmf({400, 2, 0.5}, 200), std::invalid_argument);
}

TEST_CASE("enumerate_run_count_pmf small cases") {
    const IntPmf two = cpx::enumerate_run_count_pmf({2, 2, 0.5});
    CHECK(std::abs(two.at(0) - 0.75) <= 1e-16);
    CHECK(std::abs(two.at(1) - 0.25) <= 1e-16);

    const IntPmf four = cpx::enumerate_run_count_pmf({4, 2, 0.5});
    CHECK(std::abs(cpx::moments(four).mean - 0.75) <= 1e-14);

    CHECK_THROWS_AS(cpx::enumerate_run_count_pmf({23, 2, 0.5}), std::invalid_argument);
}

TEST_CASE("dynamic program equals full enumeration") {
    for (const std::int64_t n : {4, 8, 12, 16, 20}) {
        for (const std::int64_t k : {1, 2, 3, 5}) {
            if (k > n) continue;
            for (const double p : {0.2, 0.5, 0.8}) {
                const RunsConfig cfg{n, k, p};
                const IntPmf dp = cpx::exact_run_count_pmf(cfg);
                const IntPmf brute = cpx::enumerate_run_count_pmf(cfg);
                REQUIRE(dp.offset() == brute.offset());
                const std::int64_t hi = std::max(dp.max_support(), brute.max_support());
                for (std::int64_t c = 0; c <= hi; ++c) {
                    CHECK(std::abs(dp.at(c) - brute.at(c)) <= 1e-14);
                }
            }
        }
    }
}

TEST_CASE("check_smoothing_inequality") {
    const IntPmf z = cpx::poisson_pmf(3.0, 1e-12);
    const IntPmf x(0, {0.3, 0.4, 0.3});

    SUBCASE("identical operands") {
        const cpx::InequalityCheck c = cpx::check_smoothing_inequality(x, x, z);
        CHECK(c.lhs == 0.0);
        CHECK(c.holds);
    }

    SUBCASE("adding nothing reduces to the two-sided second-order bound") {
        const IntPmf y(0, {0.4, 0.2, 0.4});  // same mean 1.0
        const cpx::InequalityCheck c = cpx::check_smoothing_inequality(x, y, IntPmf::point_mass(0));
        CHECK(std::abs(cpx::numeric_delta2_l1(IntPmf::point_mass(0)) - 4.0) <= 1e-15);
        const cpx::MetricValue d = cpx::tv_distance(x, y);
        const cpx::MetricValue zeta = cpx::zeta2(x, y);
        CHECK(std::abs(c.lhs - d.value) <= 1e-15);
        CHECK(std::abs(c.rhs - 2.0 * zeta.value) <= 1e-15);
        CHECK(c.holds);
    }

    SUBCASE("mean mismatch is rejected") {
        const IntPmf y(0, {0.5, 0.5});
        CHECK_THROWS_AS(cpx::check_smoothing_inequality(x, y, z), std::invalid_argument);
    }
}

TEST_CASE("check_product_coupling degenerate cases") {
    const IntPmf x(0, {0.3, 0.7});
    const IntPmf y(0, {0.6, 0.4});
    const IntPmf z(0, {0.2, 0.5, 0.3});

    const cpx::InequalityCheck same_zw = cpx::check_product_coupling(x, y, z, z);
    CHECK(same_zw.lhs <= 1e-15);
    CHECK(same_zw.holds);

    const cpx::InequalityCheck same_xy = cpx::check_product_coupling(x, x, z, IntPmf::point_mass(2));
    CHECK(same_xy.lhs <= 1e-15);
    CHECK(same_xy.holds);
}

TEST_CASE("check_shift_inequality") {
    const IntPmf x(0, {0.3, 0.7});
    const IntPmf y(0, {0.6, 0.4});

    SUBCASE("point mass at zero gives equality") {
        const cpx::InequalityCheck c = cpx::check_shift_inequality(x, y, IntPmf::point_mass(0));
        CHECK(std::abs(c.lhs - c.rhs) <= 1e-15);
        CHECK(c.holds);
    }

    SUBCASE("identical laws") {
        const IntPmf w(0, {0.8, 0.2});
        const cpx::InequalityCheck c = cpx::check_shift_inequality(x, x, w);
        CHECK(c.lhs == 0.0);
        CHECK(c.rhs <= 1e-15);
        CHECK(c.holds);
    }

    SUBCASE("heavy shift mass is rejected") {
        const IntPmf w(0, {0.4, 0.6});
        CHECK_THROWS_AS(cpx::check_shift_inequality(x, y, w), std::invalid_argument);
    }
}

TEST_CASE("check_zeta2_cp_identity") {
    SUBCASE("single Bernoulli summand") {
        cpx::IndepProfile profile;
        profile.ps = {0.1};
        profile.sq_means = {0.01};
        profile.severities = {IntPmf::point_mass(1)};
        const cpx::InequalityCheck c = cpx::check_zeta2_cp_identity(profile);
        CHECK(c.holds);
        CHECK(std::abs(c.lhs - 0.005) <= 1e-9);
        CHECK(std::abs(c.rhs - 0.005) <= 1e-15);
    }

    SUBCASE("three point-severity summands") {
        cpx::IndepProfile profile;
        profile.ps = {0.1, 0.2, 0.15};
        profile.severities = {IntPmf::point_mass(1), IntPmf::point_mass(2),
                              IntPmf::point_mass(3)};
        profile.sq_means = {0.01, 0.16, 0.2025};
        const cpx::InequalityCheck c = cpx::check_zeta2_cp_identity(profile);
        CHECK(c.holds);
        CHECK(std::abs(c.lhs - c.rhs) <= 1e-9);
    }

    SUBCASE("all-zero profile") {
        cpx::IndepProfile profile;
        profile.ps = {0.0, 0.0};
        profile.sq_means = {0.0, 0.0};
        profile.severities = {IntPmf::point_mass(1), IntPmf::point_mass(1)};
        const cpx::InequalityCheck c = cpx::check_zeta2_cp_identity(profile);
        CHECK(c.lhs == 0.0);
        CHECK(c.rhs == 0.0);
        CHECK(c.holds);
    }

    SUBCASE("profile size limits are enforced") {
        cpx::IndepProfile profile;
        profile.ps.assign(9, 0.01);
        profile.sq_means.assign(9, 0.0001);
        profile.severities.assign(9, IntPmf::point_mass(1));
        CHECK_THROWS_AS(cpx::check_zeta2_cp_identity(profile), std::invalid_argument);
    }
}

TEST_CASE("JointPmf validation") {
    JointPmf bad;
    bad.atoms = {{0, 0, 0.5}, {1, 1, 0.4}};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    JointPmf negative;
    negative.atoms = {{0, -1, 1.0}};
    CHECK_THROWS_AS(negative.validate(), std::invalid_argument);

    JointPmf ok;
    ok.atoms = {{0, 0, 0.25}, {0, 1, 0.25}, {1, 0, 0.25}, {1, 1, 0.25}};
    CHECK_NOTHROW(ok.validate());
    CHECK(std::abs(ok.mean_x() - 0.5) <= 1e-15);
    CHECK(std::abs(ok.mean_xz() - 0.25) <= 1e-15);
}

TEST_CASE("check_zeta2_coupling") {
    SUBCASE("comonotone indicators") {
        JointPmf j;
        j.atoms = {{0, 0, 0.8}, {1, 1, 0.2}};
        const cpx::InequalityCheck c = cpx::check_zeta2_coupling(j, IntPmf::point_mass(1));
        CHECK(c.holds);
        CHECK(c.lhs > 0.0);
        CHECK(std::abs(c.rhs - (0.2 + 0.04)) <= 1e-15);
    }

    SUBCASE("independent pair gives zero distance") {
        JointPmf j;
        j.atoms = {{0, 0, 0.56}, {0, 1, 0.24}, {1, 0, 0.14}, {1, 1, 0.06}};
        const cpx::InequalityCheck c = cpx::check_zeta2_coupling(j, IntPmf::point_mass(1));
        CHECK(c.lhs <= 1e-12);
        CHECK(c.holds);
    }

    SUBCASE("severity lift scales the moment side") {
        JointPmf j;
        j.atoms = {{0, 0, 0.8}, {1, 1, 0.2}};
        const IntPmf severity = cpx::truncated_geometric_pmf(0.4, 3);
        const cpx::InequalityCheck c = cpx::check_zeta2_coupling(j, severity);
        const double sev_mean = cpx::moments(severity).mean;
        CHECK(std::abs(c.rhs - sev_mean * sev_mean * 0.24) <= 1e-14);
        CHECK(c.holds);
    }
}

TEST_CASE("randomized verification suites pass on a reduced budget") {
    CHECK(cpx::verify_smoothing_suite(20081122, 40).passed());
    CHECK(cpx::verify_product_coupling_suite(20081122, 40).passed());
    CHECK(cpx::verify_shift_suite(20081122, 40).passed());
    CHECK(cpx::verify_zeta2_cp_identity_suite(20081122, 8).passed());
    CHECK(cpx::verify_zeta2_coupling_suite().passed());
}
