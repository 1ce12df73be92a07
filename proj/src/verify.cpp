#include "cpapprox/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cpapprox/bounds.hpp"
#include "cpapprox/detail/random.hpp"
#include "cpapprox/detail/summation.hpp"
#include "cpapprox/metrics.hpp"
#include "cpapprox/oracle.hpp"
#include "cpapprox/runs.hpp"
#include "cpapprox/smoothness.hpp"

namespace cpx {

namespace {

using detail::SplitMix64;

std::string describe(const char* what, int case_id, const InequalityCheck& c) {
    std::ostringstream os;
    os << what << " case " << case_id << ": lhs " << c.lhs << " vs rhs " << c.rhs;
    return os.str();
}

// Random pmf supported inside {lo..hi} (some entries may be zero).
IntPmf random_pmf(SplitMix64& rng, std::int64_t lo, std::int64_t hi) {
    const std::size_t width = static_cast<std::size_t>(hi - lo + 1);
    std::vector<double> w(width);
    double total = 0.0;
    for (double& x : w) {
        // exponential weights make very uneven masses common
        x = -std::log(1.0 - rng.uniform());
        if (rng.below(4) == 0) x = 0.0;
        total += x;
    }
    if (total == 0.0) {
        w[rng.below(width)] = 1.0;
        total = 1.0;
    }
    for (double& x : w) x /= total;
    return IntPmf(lo, std::move(w));
}

// Random pair with exactly matching means: the second pmf is blended with a
// point mass at an endpoint to move its mean onto the first's.
std::pair<IntPmf, IntPmf> random_equal_mean_pair(SplitMix64& rng, std::int64_t lo,
                                                 std::int64_t hi) {
    const IntPmf a = random_pmf(rng, lo, hi);
    const IntPmf b0 = random_pmf(rng, lo, hi);
    const double ma = moments(a).mean;
    const double mb = moments(b0).mean;
    double t;
    std::int64_t anchor;
    if (mb <= ma) {
        anchor = hi;
        t = (static_cast<double>(hi) == mb) ? 0.0 : (ma - mb) / (static_cast<double>(hi) - mb);
    } else {
        anchor = lo;
        t = (mb == static_cast<double>(lo)) ? 0.0 : (mb - ma) / (mb - static_cast<double>(lo));
    }
    t = std::clamp(t, 0.0, 1.0);
    std::vector<double> probs(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (std::int64_t k = lo; k <= hi; ++k) {
        probs[static_cast<std::size_t>(k - lo)] = (1.0 - t) * b0.at(k);
    }
    probs[static_cast<std::size_t>(anchor - lo)] += t;
    return {a, IntPmf(lo, std::move(probs))};
}

}  // namespace

SuiteResult verify_smoothing_suite(std::uint64_t seed, int cases) {
    SuiteResult out{"smoothing-inequality", cases, 0, {}};
    const IntPmf z = poisson_pmf(3.0, 1e-12);
    for (int i = 0; i < cases; ++i) {
        SplitMix64 rng(seed + static_cast<std::uint64_t>(i) * 0x9e3779b9ULL);
        const auto [x, y] = random_equal_mean_pair(rng, 0, 6);
        const InequalityCheck c = check_smoothing_inequality(x, y, z);
        if (!c.holds) {
            ++out.failures;
            out.messages.push_back(describe("smoothing", i, c));
        }
    }
    return out;
}

SuiteResult verify_product_coupling_suite(std::uint64_t seed, int cases) {
    SuiteResult out{"product-coupling", cases, 0, {}};
    for (int i = 0; i < cases; ++i) {
        SplitMix64 rng(seed + 0x5bd1e995ULL + static_cast<std::uint64_t>(i) * 0x9e3779b9ULL);
        const IntPmf x = random_pmf(rng, 0, 5);
        const IntPmf y = random_pmf(rng, 0, 5);
        const IntPmf z = random_pmf(rng, 0, 5);
        const IntPmf w = random_pmf(rng, 0, 5);
        const InequalityCheck c = check_product_coupling(x, y, z, w);
        if (!c.holds) {
            ++out.failures;
            out.messages.push_back(describe("product-coupling", i, c));
        }
    }
    return out;
}

SuiteResult verify_shift_suite(std::uint64_t seed, int cases) {
    SuiteResult out{"shift-inequality", cases, 0, {}};
    for (int i = 0; i < cases; ++i) {
        SplitMix64 rng(seed + 0xc2b2ae35ULL + static_cast<std::uint64_t>(i) * 0x9e3779b9ULL);
        const IntPmf x = random_pmf(rng, 0, 5);
        const IntPmf y = random_pmf(rng, 0, 5);
        // W with P(W = 0) in (0.6, 1)
        const double w0 = rng.uniform(0.6 + 1e-9, 1.0 - 1e-9);
        const IntPmf tail = random_pmf(rng, 1, 4);
        std::vector<double> probs(5, 0.0);
        probs[0] = w0;
        for (std::int64_t k = 1; k <= 4; ++k) {
            probs[static_cast<std::size_t>(k)] = (1.0 - w0) * tail.at(k);
        }
        const IntPmf w(0, std::move(probs));
        const InequalityCheck c = check_shift_inequality(x, y, w);
        if (!c.holds) {
            ++out.failures;
            out.messages.push_back(describe("shift", i, c));
        }
    }
    return out;
}

SuiteResult verify_zeta2_cp_identity_suite(std::uint64_t seed, int cases) {
    SuiteResult out{"zeta2-cp-identity", cases, 0, {}};
    for (int i = 0; i < cases; ++i) {
        SplitMix64 rng(seed + 0x27d4eb2fULL + static_cast<std::uint64_t>(i) * 0x9e3779b9ULL);
        const std::size_t n = 1 + rng.below(8);
        IndepProfile profile;
        for (std::size_t j = 0; j < n; ++j) {
            const double p = rng.uniform(0.0, 0.25);
            const IntPmf sev = random_pmf(rng, 1, 1 + static_cast<std::int64_t>(rng.below(4)));
            const double mean = p * moments(sev).mean;
            profile.ps.push_back(p);
            profile.sq_means.push_back(mean * mean);
            profile.severities.push_back(sev);
        }
        const InequalityCheck c = check_zeta2_cp_identity(profile);
        if (!c.holds) {
            ++out.failures;
            out.messages.push_back(describe("zeta2-cp-identity", i, c));
        }
    }
    return out;
}

SuiteResult verify_zeta2_coupling_suite() {
    SuiteResult out{"zeta2-coupling", 0, 0, {}};
    std::vector<std::pair<std::string, InequalityCheck>> checks;

    // independent pair: both laws coincide, lhs must vanish
    {
        JointPmf j;
        for (std::int64_t x = 0; x <= 2; ++x) {
            for (std::int64_t z = 0; z <= 2; ++z) {
                j.atoms.push_back({x, z, (0.2 + 0.1 * static_cast<double>(x)) *
                                             (0.25 + 0.05 * static_cast<double>(z)) /
                                             (0.9 * 0.9)});
            }
        }
        double s = 0.0;
        for (auto& a : j.atoms) s += a.prob;
        for (auto& a : j.atoms) a.prob /= s;
        const InequalityCheck c = check_zeta2_coupling(j, IntPmf::point_mass(1));
        ++out.cases;
        if (!c.holds || c.lhs > 1e-9) {
            ++out.failures;
            out.messages.push_back(describe("independent (lhs must vanish)", out.cases, c));
        }
    }

    // adjacent run indicators on three coin flips: X = Z1 Z2, Z = Z2 Z3
    for (const double p : {0.5, 0.3}) {
        JointPmf j;
        double p00 = 0.0, p01 = 0.0, p10 = 0.0, p11 = 0.0;
        for (int bits = 0; bits < 8; ++bits) {
            const int z1 = bits & 1, z2 = (bits >> 1) & 1, z3 = (bits >> 2) & 1;
            const int ones = z1 + z2 + z3;
            const double pr = std::pow(p, ones) * std::pow(1.0 - p, 3 - ones);
            const int x = z1 & z2, z = z2 & z3;
            (x ? (z ? p11 : p10) : (z ? p01 : p00)) += pr;
        }
        j.atoms = {{0, 0, p00}, {0, 1, p01}, {1, 0, p10}, {1, 1, p11}};
        checks.emplace_back("adjacent-runs", check_zeta2_coupling(j, IntPmf::point_mass(1)));
    }

    // comonotone pair X = Z ~ Bernoulli(0.2), with and without a severity lift
    {
        JointPmf j;
        j.atoms = {{0, 0, 0.8}, {1, 1, 0.2}};
        checks.emplace_back("comonotone", check_zeta2_coupling(j, IntPmf::point_mass(1)));
        checks.emplace_back("comonotone-lifted",
                            check_zeta2_coupling(j, truncated_geometric_pmf(0.4, 3)));
    }

    // anticomonotone indicators
    {
        JointPmf j;
        j.atoms = {{0, 1, 0.5}, {1, 0, 0.5}};
        checks.emplace_back("anticomonotone", check_zeta2_coupling(j, IntPmf::point_mass(1)));
    }

    for (const auto& [name, c] : checks) {
        ++out.cases;
        if (!c.holds) {
            ++out.failures;
            out.messages.push_back(describe(name.c_str(), out.cases, c));
        }
    }
    return out;
}

SuiteResult verify_runs_dominance_suite(std::int64_t cap, double eps) {
    SuiteResult out{"runs-dominance", 0, 0, {}};
    for (const std::int64_t n : {20, 60, 120, 200}) {
        if (n > cap) continue;
        for (const std::int64_t k : {2, 3, 4, 5}) {
            for (const double p : {0.05, 0.1, 0.2, 0.3}) {
                const RunsConfig cfg{n, k, p};
                const IntPmf exact = exact_run_count_pmf(cfg, cap);

                if (cfg.m_po() < kLog2) {
                    ++out.cases;
                    const BoundReport ub = runs_po_bound(cfg);
                    const MetricValue d = tv_distance(exact, poisson_pmf(cfg.lambda_po(), eps));
                    if (d.value - d.error_bar > ub.total) {
                        ++out.failures;
                        std::ostringstream os;
                        os << "runs-po n=" << n << " k=" << k << " p=" << p << ": d " << d.value
                           << " > bound " << ub.total;
                        out.messages.push_back(os.str());
                    }
                }
                if (cfg.m_cp() < kLog2) {
                    ++out.cases;
                    const BoundReport ub = total_pa_bound(cfg, eps);
                    const MetricValue d =
                        tv_distance(exact, polya_aeppli_pmf(cfg.lambda_cp(), p, eps));
                    if (d.value - d.error_bar > ub.total) {
                        ++out.failures;
                        std::ostringstream os;
                        os << "runs-pa n=" << n << " k=" << k << " p=" << p << ": d " << d.value
                           << " > bound " << ub.total;
                        out.messages.push_back(os.str());
                    }
                }
            }
        }
    }
    return out;
}

SuiteResult verify_bernoulli_dominance_suite(std::uint64_t seed, int cases) {
    SuiteResult out{"bernoulli-dominance", cases, 0, {}};
    for (int i = 0; i < cases; ++i) {
        SplitMix64 rng(seed + 0x165667b1ULL + static_cast<std::uint64_t>(i) * 0x9e3779b9ULL);
        const std::size_t n = 1 + rng.below(12);
        BernoulliProfile profile;
        IntPmf sum = IntPmf::point_mass(0);
        for (std::size_t j = 0; j < n; ++j) {
            const double p = rng.uniform(1e-4, 0.2);
            profile.ps.push_back(p);
            sum = convolve(sum, bernoulli_pmf(p));
        }
        const double lambda = detail::sum(profile.ps);
        const BoundReport ub =
            ub_po_bernoulli(profile, poisson_delta2_l1_exact(lambda), NormMethod::exact_poisson);
        const MetricValue d = tv_distance(sum, poisson_pmf(lambda, 1e-13));
        if (d.value - d.error_bar > ub.total) {
            ++out.failures;
            std::ostringstream os;
            os << "bernoulli case " << i << ": d " << d.value << " > bound " << ub.total;
            out.messages.push_back(os.str());
        }
    }
    return out;
}

SuiteResult verify_cp_dominance_suite(std::uint64_t seed, int cases) {
    SuiteResult out{"compound-dominance", cases, 0, {}};
    for (int i = 0; i < cases; ++i) {
        SplitMix64 rng(seed + 0x85ebca6bULL + static_cast<std::uint64_t>(i) * 0x9e3779b9ULL);
        const std::size_t n = 1 + rng.below(8);
        IndepProfile profile;
        IntPmf sum = IntPmf::point_mass(0);
        for (std::size_t j = 0; j < n; ++j) {
            const double p = rng.uniform(1e-4, 0.2);
            const IntPmf sev = random_pmf(rng, 1, 3);
            profile.ps.push_back(p);
            const double mean = p * moments(sev).mean;
            profile.sq_means.push_back(mean * mean);
            profile.severities.push_back(sev);
            std::vector<double> probs(static_cast<std::size_t>(sev.max_support()) + 1, 0.0);
            probs[0] = 1.0 - p;
            for (std::size_t t = 0; t < sev.size(); ++t) {
                probs[static_cast<std::size_t>(sev.offset()) + t] += p * sev.probs()[t];
            }
            sum = convolve(sum, IntPmf(0, std::move(probs)));
        }
        const IntPmf cp =
            compound_poisson_pmf({profile.lambda(), profile.compounding_mixture()}, 1e-13);
        const BoundReport ub =
            ub_cp_independent(profile, numeric_delta2_l1(cp), NormMethod::numeric);
        const MetricValue d = tv_distance(sum, cp);
        if (d.value - d.error_bar > ub.total) {
            ++out.failures;
            std::ostringstream os;
            os << "compound case " << i << ": d " << d.value << " > bound " << ub.total;
            out.messages.push_back(os.str());
        }
    }
    return out;
}

namespace {

struct Table1Ref {
    double lambda;
    double p;
    double norm;
    double norm_tol;
    double heuristic;
};

// Reference values for the 3 x 4 compound-geometric norm table, with the
// normal-approximation column; comparison tolerances account for their
// published rounding.
constexpr Table1Ref kTable1Refs[] = {
    {1, 0.2, 0.97120, 1e-4, 0.516204},   {5, 0.2, 0.115414, 1e-4, 0.103241},
    {10, 0.2, 0.054341, 1e-4, 0.051620}, {100, 0.2, 0.005189, 1e-4, 0.005162},
    {1, 0.5, 1.10364, 1e-4, 0.161314},   {5, 0.5, 0.040737, 1e-4, 0.032263},
    {10, 0.5, 0.017866, 1e-5, 0.016131}, {100, 0.5, 0.001628, 1e-4, 0.001613},
    {1, 0.8, 1.32437, 1e-4, 0.021509},   {5, 0.8, 0.019508, 1e-4, 0.004302},
    {10, 0.8, 0.002474, 1e-4, 0.002151}, {100, 0.8, 0.000218, 2e-6, 0.000215},
};

}  // namespace

std::vector<Table1Row> table1(double eps) {
    std::vector<Table1Row> rows;
    rows.reserve(12);
    for (const Table1Ref& ref : kTable1Refs) {
        const IntPmf cp = polya_aeppli_pmf(ref.lambda, ref.p, eps);
        const double q = 1.0 - ref.p;
        const double second_raw = (1.0 + ref.p) / (q * q);
        rows.push_back({ref.lambda, ref.p, numeric_delta2_l1(cp),
                        normal_heuristic_delta2(ref.lambda, second_raw)});
    }
    return rows;
}

SuiteResult verify_table1_suite(double eps) {
    SuiteResult out{"table1", 0, 0, {}};
    const std::vector<Table1Row> rows = table1(eps);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Table1Ref& ref = kTable1Refs[i];
        ++out.cases;
        if (std::abs(rows[i].norm - ref.norm) > ref.norm_tol) {
            ++out.failures;
            std::ostringstream os;
            os << "norm lambda=" << ref.lambda << " p=" << ref.p << ": got " << rows[i].norm
               << " want " << ref.norm << " +/- " << ref.norm_tol;
            out.messages.push_back(os.str());
        }
        ++out.cases;
        if (std::abs(rows[i].heuristic - ref.heuristic) > 1e-6) {
            ++out.failures;
            std::ostringstream os;
            os << "heuristic lambda=" << ref.lambda << " p=" << ref.p << ": got "
               << rows[i].heuristic << " want " << ref.heuristic << " +/- 1e-6";
            out.messages.push_back(os.str());
        }
    }
    return out;
}

std::vector<SuiteResult> verify_lemma_suites(std::uint64_t seed) {
    return {verify_smoothing_suite(seed), verify_product_coupling_suite(seed),
            verify_shift_suite(seed), verify_zeta2_cp_identity_suite(seed),
            verify_zeta2_coupling_suite()};
}

std::vector<SuiteResult> verify_all(std::uint64_t seed, std::int64_t cap, double eps) {
    std::vector<SuiteResult> all = verify_lemma_suites(seed);
    all.push_back(verify_runs_dominance_suite(cap, eps));
    all.push_back(verify_bernoulli_dominance_suite(seed));
    all.push_back(verify_cp_dominance_suite(seed));
    all.push_back(verify_table1_suite(eps));
    return all;
}

}  // namespace cpx
