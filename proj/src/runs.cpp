#include "cpapprox/runs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cpapprox/smoothness.hpp"

namespace cpx {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

double shift_denom(double x) { return 2.0 * std::exp(-x) - 1.0; }

void require_declumpable(const RunsConfig& cfg, const char* who) {
    cfg.validate();
    // A clump of 1-runs is degenerate: the truncated clump construction and
    // the declumping estimate both presume a 2k-window.
    require(cfg.k >= 2, std::string(who) + ": clump-based bounds need k >= 2");
}

}  // namespace

double RunsConfig::p_pow_k() const noexcept { return std::pow(p, static_cast<double>(k)); }

double RunsConfig::lambda_po() const noexcept { return static_cast<double>(windows()) * p_pow_k(); }

double RunsConfig::lambda_cp() const noexcept { return q() * lambda_po(); }

double RunsConfig::m_po() const noexcept { return static_cast<double>(3 * k - 2) * p_pow_k(); }

double RunsConfig::m_cp() const noexcept { return static_cast<double>(6 * k - 2) * q() * p_pow_k(); }

void RunsConfig::validate() const {
    require(n >= 1 && k >= 1 && k <= n, "RunsConfig: need 1 <= k <= n");
    require(p > 0.0 && p < 1.0, "RunsConfig: p must be in (0, 1)");
}

BoundReport runs_po_bound(const RunsConfig& cfg) {
    cfg.validate();
    const double lambda = cfg.lambda_po();
    const double m = cfg.m_po();
    const double q = cfg.q();
    const double pk = cfg.p_pow_k();
    const double pk1 = pk / cfg.p;  // p^{k-1}
    const double norm = poisson_delta2_l1_exact(lambda);
    const bool valid = m < kLog2;

    const double c = 4.0 * lambda * lambda * cfg.p * cfg.p / q *
                     (1.0 + q * static_cast<double>(cfg.k) * pk1 / lambda) *
                     (1.0 + q * static_cast<double>(cfg.k) * pk1);
    const double s = lambda * cfg.p * norm / (2.0 * q * shift_denom(m));

    BoundReport r;
    r.c_term = c;
    r.smooth_term = s;
    r.total = c + s;
    r.norm_used = norm;
    r.norm_method = NormMethod::exact_poisson;
    r.lambda = lambda;
    r.valid = valid;
    r.notes.push_back("target Po(lambda), lambda = (n-k+1) p^k");
    if (!valid) r.notes.push_back("hypothesis m < log 2 violated; formula value reported anyway");
    return r;
}

double declumping_bound(const RunsConfig& cfg) {
    require_declumpable(cfg, "declumping_bound");
    const double first =
        std::max<double>(0.0, static_cast<double>(cfg.n - 2 * cfg.k + 1)) * cfg.q() *
        std::pow(cfg.p, static_cast<double>(2 * cfg.k));
    return first + 2.0 * std::pow(cfg.p, static_cast<double>(cfg.k + 1));
}

BoundReport runs_cp_bound(const RunsConfig& cfg, double norm) {
    require_declumpable(cfg, "runs_cp_bound");
    require(norm >= 0.0, "runs_cp_bound: norm must be >= 0");
    const double lambda = cfg.lambda_cp();
    const double m = cfg.m_cp();
    const double q = cfg.q();
    const double pk = cfg.p_pow_k();
    const double kk = static_cast<double>(cfg.k);
    const bool valid = m < kLog2;

    const double edge = 6.0 * lambda * kk * q * pk;
    const double c = (1.0 + 2.0 / (3.0 * lambda)) * edge * edge;
    const double s = 0.25 * norm / shift_denom(m) * lambda / q * (6.0 * kk - 3.0) * pk;

    BoundReport r;
    r.c_term = c;
    r.smooth_term = s;
    r.total = c + s;
    r.norm_used = norm;
    r.norm_method = NormMethod::numeric;
    r.lambda = lambda;
    r.valid = valid;
    r.notes.push_back("target CP(lambda, geometric truncated at k), lambda = (n-k+1) q p^k");
    if (!valid) r.notes.push_back("hypothesis m < log 2 violated; formula value reported anyway");
    return r;
}

BoundReport runs_cp_bound_improved(const RunsConfig& cfg, double norm) {
    require_declumpable(cfg, "runs_cp_bound_improved");
    require(norm >= 0.0, "runs_cp_bound_improved: norm must be >= 0");
    const double lambda = cfg.lambda_cp();
    const double m = cfg.m_cp();
    const double q = cfg.q();
    const double pk = cfg.p_pow_k();
    const double kk = static_cast<double>(cfg.k);
    const bool valid = m < kLog2;

    const double c = 12.0 * (1.0 + 1.0 / (kk * q) + 2.0 * q * q / lambda) *
                     (lambda * kk * pk) * (lambda * kk * pk);
    const double s = 0.5 * norm / shift_denom(m) * (1.0 + (1.0 + cfg.p) / (2.0 * kk * q)) *
                     lambda / q * kk * pk;

    BoundReport r;
    r.c_term = c;
    r.smooth_term = s;
    r.total = c + s;
    r.norm_used = norm;
    r.norm_method = NormMethod::numeric;
    r.lambda = lambda;
    r.valid = valid;
    r.notes.push_back("NQD refinement of the truncated-clump bound");
    if (!valid) r.notes.push_back("hypothesis m < log 2 violated; formula value reported anyway");
    return r;
}

double compounding_swap_bound(double lambda, const RunsConfig& cfg) {
    cfg.validate();
    require(lambda > 0.0, "compounding_swap_bound: lambda must be > 0");
    return lambda * cfg.p_pow_k();
}

double runs_cp_norm(const RunsConfig& cfg, double eps) {
    require_declumpable(cfg, "runs_cp_norm");
    const IntPmf severity = truncated_geometric_pmf(cfg.p, cfg.k);
    return numeric_delta2_l1(compound_poisson_pmf({cfg.lambda_cp(), severity}, eps));
}

BoundReport total_pa_bound(const RunsConfig& cfg, double eps) {
    return total_pa_bound(cfg, runs_cp_norm(cfg, eps), NormMethod::numeric);
}

BoundReport total_pa_bound(const RunsConfig& cfg, double norm, NormMethod method) {
    require_declumpable(cfg, "total_pa_bound");
    const double declump = declumping_bound(cfg);
    BoundReport cp = runs_cp_bound(cfg, norm);
    const double swap = compounding_swap_bound(cfg.lambda_cp(), cfg);

    BoundReport r;
    r.c_term = declump + cp.c_term + swap;
    r.smooth_term = cp.smooth_term;
    r.total = r.c_term + r.smooth_term;
    r.norm_used = norm;
    r.norm_method = method;
    r.lambda = cfg.lambda_cp();
    r.valid = cp.valid;
    r.notes.push_back("target PA(lambda, p), lambda = (n-k+1) q p^k");
    r.notes.push_back("assembled as declumping + truncated-clump bound + compounding swap");
    r.notes.push_back("declumping term " + std::to_string(declump) + ", swap term " +
                      std::to_string(swap));
    if (!cp.valid) r.notes.push_back("hypothesis m < log 2 violated; formula value reported anyway");
    return r;
}

SteinChenComparators stein_chen_comparators(const RunsConfig& cfg) {
    cfg.validate();
    SteinChenComparators out;
    if (cfg.p > 1.0 / 3.0) return out;

    const double q = cfg.q();
    out.po = 2.0 * cfg.p / q;

    const double kpk = static_cast<double>(cfg.k) * cfg.p_pow_k();
    const double lambda = cfg.lambda_cp();
    const double log_plus = std::max(0.0, std::log(lambda * q * (1.0 - 2.0 * cfg.p)));
    const double log_form = log_plus / (q * q * (1.0 - 2.0 * cfg.p)) * 6.0 * kpk;
    if (cfg.p <= 0.2) {
        out.cp = 6.0 * q / (1.0 - 5.0 * cfg.p) * kpk;
    } else {
        out.cp = log_form;
    }
    return out;
}

LocalDepProfile run_indicator_profile(const RunsConfig& cfg) {
    cfg.validate();
    const int nn = static_cast<int>(cfg.windows());
    const double pk = cfg.p_pow_k();
    LocalDepProfile pr;
    pr.k = static_cast<int>(cfg.k);
    pr.ps.assign(static_cast<std::size_t>(nn), pk);
    pr.means.assign(static_cast<std::size_t>(nn), pk);
    pr.sq_means.assign(static_cast<std::size_t>(nn), pk * pk);
    pr.severities.assign(static_cast<std::size_t>(nn), IntPmf::point_mass(1));
    for (int i = 1; i <= nn; ++i) {
        for (int j = std::max(1, i - pr.k + 1); j <= i - 1; ++j) {
            // X_i X_j = 1 exactly when trials j .. i+k-1 all succeed
            const double joint = std::pow(cfg.p, static_cast<double>(i - j) + static_cast<double>(cfg.k));
            pr.cross_moments.set(i, j, joint);
            pr.joint_nonzero.set(i, j, joint);
            pr.covariances.set(i, j, joint - pk * pk);
        }
    }
    return pr;
}

LocalDepProfile declumped_run_profile(const RunsConfig& cfg) {
    require_declumpable(cfg, "declumped_run_profile");
    const int nn = static_cast<int>(cfg.windows());
    const double pk = cfg.p_pow_k();
    const double q = cfg.q();
    const int range = static_cast<int>(2 * cfg.k);
    const double mean = pk * (1.0 - pk);

    LocalDepProfile pr;
    pr.k = range;
    pr.ps.assign(static_cast<std::size_t>(nn), q * pk);
    pr.means.assign(static_cast<std::size_t>(nn), mean);
    pr.sq_means.assign(static_cast<std::size_t>(nn), mean * mean);
    pr.severities.assign(static_cast<std::size_t>(nn), truncated_geometric_pmf(cfg.p, cfg.k));
    for (int i = 1; i <= nn; ++i) {
        for (int j = std::max(1, i - range + 1); j <= i - 1; ++j) {
            const int d = i - j;
            double cross = 0.0;
            double joint = 0.0;
            if (d > cfg.k) {
                // clumps at distance in (k, 2k): the earlier truncated clump
                // must end before the later one starts
                cross = pk * pk * (1.0 - std::pow(cfg.p, static_cast<double>(d - cfg.k))) *
                        (1.0 - pk);
                joint = q * q * pk * pk;
            }
            pr.cross_moments.set(i, j, cross);
            pr.joint_nonzero.set(i, j, joint);
            pr.covariances.set(i, j, cross - mean * mean);
        }
    }
    return pr;
}

}  // namespace cpx
