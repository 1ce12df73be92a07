#include "cpapprox/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cpapprox/detail/summation.hpp"

namespace cpx {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// 1 - 2(1 - e^{-x}); positive exactly when x < log 2.
double shift_denom(double x) { return 2.0 * std::exp(-x) - 1.0; }

BoundReport make_report(double c_term, double smooth_term, double norm, NormMethod method,
                        double lambda, bool valid) {
    BoundReport r;
    r.c_term = c_term;
    r.smooth_term = smooth_term;
    r.total = c_term + smooth_term;
    r.norm_used = norm;
    r.norm_method = method;
    r.lambda = lambda;
    r.valid = valid;
    return r;
}

}  // namespace

void IndepProfile::validate() const {
    require(sq_means.size() == ps.size() && severities.size() == ps.size(),
            "IndepProfile: field lengths differ");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        require(ps[i] >= 0.0 && ps[i] <= 1.0, "IndepProfile: p out of [0, 1]");
        require(sq_means[i] >= 0.0, "IndepProfile: negative squared mean");
        require(severities[i].offset() >= 1, "IndepProfile: severity with mass at or below 0");
        const double implied = ps[i] * moments(severities[i]).mean;
        require(std::abs(sq_means[i] - implied * implied) <= 1e-9,
                "IndepProfile: sq_means inconsistent with p * mean(severity)");
    }
}

double IndepProfile::lambda() const { return detail::sum(ps); }

IntPmf IndepProfile::compounding_mixture() const {
    const double lam = lambda();
    require(lam > 0.0, "IndepProfile: mixture undefined for all-zero ps");
    std::vector<double> weights(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) weights[i] = ps[i] / lam;
    // Renormalize the last rounding crumb so mixture() sees weights summing to 1.
    const double excess = detail::sum(weights) - 1.0;
    weights.back() -= excess;
    return mixture(weights, severities);
}

void WindowedMoments::set(int i, int j, double value) {
    require(i > j && j >= 1, "WindowedMoments: requires i > j >= 1");
    m_[{i, j}] = value;
}

double WindowedMoments::get(int i, int j) const noexcept {
    if (j < 1 || i <= j) return 0.0;
    const auto it = m_.find({i, j});
    return it == m_.end() ? 0.0 : it->second;
}

double LocalDepProfile::m_hypothesis() const noexcept {
    double worst = 0.0;
    for (int i = 1; i <= n(); ++i) {
        double s = 0.0;
        for (int j = std::max(1, i - 3 * k + 3); j <= i; ++j) s += p(j);
        worst = std::max(worst, s);
    }
    return worst;
}

void LocalDepProfile::validate() const {
    require(k >= 1, "LocalDepProfile: k must be >= 1");
    const std::size_t nn = ps.size();
    require(means.size() == nn && sq_means.size() == nn, "LocalDepProfile: field lengths differ");
    require(severities.empty() || severities.size() == nn,
            "LocalDepProfile: severities must be absent or one per index");
    for (std::size_t i = 0; i < nn; ++i) {
        require(ps[i] >= 0.0 && ps[i] <= 1.0, "LocalDepProfile: p out of [0, 1]");
        require(means[i] >= 0.0 && sq_means[i] >= 0.0, "LocalDepProfile: negative moment");
    }
    for (const auto& [key, value] : joint_nonzero.entries()) {
        const auto [i, j] = key;
        require(i >= 1 && i <= static_cast<int>(nn), "LocalDepProfile: joint_nonzero index out of range");
        require(value <= std::min(p(i), p(j)) + 1e-12,
                "LocalDepProfile: joint_nonzero exceeds min(p_i, p_j)");
        require(value >= 0.0, "LocalDepProfile: negative joint_nonzero");
    }
    for (const auto& [key, value] : cross_moments.entries()) {
        require(value >= 0.0, "LocalDepProfile: negative cross moment");
        (void)key;
    }
    for (const auto& sev : severities) {
        require(sev.offset() >= 1, "LocalDepProfile: severity with mass at or below 0");
    }
}

double LocalDepProfile::lambda() const { return detail::sum(ps); }

IntPmf LocalDepProfile::compounding_mixture() const {
    require(!severities.empty(), "LocalDepProfile: no severities");
    const double lam = lambda();
    require(lam > 0.0, "LocalDepProfile: mixture undefined for all-zero ps");
    std::vector<double> weights(ps.size());
    for (std::size_t i = 0; i < ps.size(); ++i) weights[i] = ps[i] / lam;
    const double excess = detail::sum(weights) - 1.0;
    weights.back() -= excess;
    return mixture(weights, severities);
}

BoundReport ub_cp_independent(const IndepProfile& profile, double norm, NormMethod method) {
    profile.validate();
    require(norm >= 0.0, "ub_cp_independent: norm must be >= 0");

    detail::NeumaierSum sum_p2;
    detail::NeumaierSum smooth_sum;
    bool valid = true;
    for (std::size_t i = 0; i < profile.n(); ++i) {
        const double p = profile.ps[i];
        sum_p2.add(p * p);
        if (p >= kLog2) valid = false;
        smooth_sum.add(profile.sq_means[i] / shift_denom(p));
    }
    const double sp2 = sum_p2.value();
    BoundReport r = make_report(sp2 * sp2, 0.25 * norm * smooth_sum.value(), norm, method,
                                profile.lambda(), valid);
    if (!valid) {
        r.notes.push_back("hypothesis p_i < log 2 violated; formula value reported anyway");
    }
    return r;
}

BoundReport ub_po_bernoulli(const BernoulliProfile& profile, double norm, NormMethod method) {
    require(norm >= 0.0, "ub_po_bernoulli: norm must be >= 0");
    detail::NeumaierSum sum_p;
    detail::NeumaierSum sum_p2;
    detail::NeumaierSum smooth_sum;
    bool valid = true;
    for (double p : profile.ps) {
        require(p >= 0.0 && p <= 1.0, "ub_po_bernoulli: p out of [0, 1]");
        sum_p.add(p);
        sum_p2.add(p * p);
        if (p >= kLog2) valid = false;
        smooth_sum.add(p * p / shift_denom(p));
    }
    const double sp2 = sum_p2.value();
    BoundReport r = make_report(sp2 * sp2, 0.25 * norm * smooth_sum.value(), norm, method,
                                sum_p.value(), valid);
    if (!valid) {
        r.notes.push_back("hypothesis p_i < log 2 violated; formula value reported anyway");
    }
    return r;
}

BoundReport ub_po_iid_refined(std::int64_t n, double p) {
    require(n >= 1, "ub_po_iid_refined: n must be >= 1");
    require(p > 0.0 && p < 1.0, "ub_po_iid_refined: p must be in (0, 1)");
    const double lambda = static_cast<double>(n) * p;
    const bool valid = (p < 1.0 / 3.0) && (lambda >= 1.0 / 3.0 + p);

    const double c = (2.0 * p * p / 3.0) *
                         (std::log(3.0 * static_cast<double>(n) * p / (1.0 - 3.0 * p)) + 1.0) +
                     2.0 * p * p * p;
    const double norm = poisson_delta2_l1_exact(lambda);
    const double s = 0.25 * norm * static_cast<double>(n) * p * p / shift_denom(p);
    BoundReport r = make_report(c, s, norm, NormMethod::exact_poisson, lambda, valid);
    r.notes.push_back("log-refined first term replaces (sum p_i^2)^2");
    if (!valid) {
        r.notes.push_back("requires p < 1/3 and n p >= 1/3 + p; formula value reported anyway");
    }
    return r;
}

namespace {

// C_n of the moment-form k-dependent bound. `inner` supplies the per-j inner
// sum of the first bracket (the two variants differ only there).
template <typename Inner>
double kdep_c_term(const LocalDepProfile& pr, Inner inner) {
    const int n = pr.n();
    const int k = pr.k;
    detail::NeumaierSum cn;
    // first bracket grows with i; reuse the running prefix over j
    detail::NeumaierSum prefix;
    int prefix_top = 0;
    for (int i = 1; i <= n; ++i) {
        const int jtop = i - 3 * k + 2;
        while (prefix_top < jtop) {
            ++prefix_top;
            prefix.add(inner(prefix_top));
        }
        double first = 2.0 * prefix.value();
        for (int j = std::max(1, i - 3 * k + 3); j <= i - 2 * k + 1; ++j) first += pr.p(j);

        double second = pr.p(i) * pr.p(i);
        for (int j = std::max(1, i - k + 1); j <= i - 1; ++j) {
            second += 2.0 * (pr.joint_nonzero.get(i, j) + pr.p(i) * pr.p(j));
        }
        cn.add(first * second);
    }
    return 2.0 * cn.value();
}

}  // namespace

BoundReport ub_cp_kdep_moments(const LocalDepProfile& profile, double norm, NormMethod method) {
    profile.validate();
    require(norm >= 0.0, "ub_cp_kdep_moments: norm must be >= 0");
    const int n = profile.n();
    const int k = profile.k;
    const double m = profile.m_hypothesis();
    const bool valid = m < kLog2;

    detail::NeumaierSum smooth_sum;
    for (int i = 1; i <= n; ++i) {
        double w = 0.5 * profile.sq_means[static_cast<std::size_t>(i - 1)];
        for (int j = std::max(1, i - k + 1); j <= i - 1; ++j) {
            w += profile.cross_moments.get(i, j) + profile.mean(i) * profile.mean(j);
        }
        smooth_sum.add(w);
    }
    const double smooth = norm / (2.0 * shift_denom(m)) * smooth_sum.value();

    const double c = kdep_c_term(profile, [&](int j) {
        double inner = 0.5 * profile.p(j) * profile.p(j);
        for (int t = std::max(1, j - k + 1); t <= j - 1; ++t) {
            inner += profile.joint_nonzero.get(j, t) + profile.p(t) * profile.p(j);
        }
        return inner;
    });

    BoundReport r = make_report(c, smooth, norm, method, profile.lambda(), valid);
    if (!valid) {
        r.notes.push_back("hypothesis m < log 2 violated; formula value reported anyway");
    }
    return r;
}

BoundReport ub_cp_kdep_quadrant(const LocalDepProfile& profile, double norm, NormMethod method) {
    profile.validate();
    require(norm >= 0.0, "ub_cp_kdep_quadrant: norm must be >= 0");
    const int n = profile.n();
    const int k = profile.k;
    const double m = profile.m_hypothesis();
    const bool valid = m < kLog2;

    detail::NeumaierSum smooth_sum;
    for (int i = 1; i <= n; ++i) {
        double w = 0.5 * profile.sq_means[static_cast<std::size_t>(i - 1)];
        for (int j = std::max(1, i - k + 1); j <= i - 1; ++j) {
            w += std::abs(profile.covariances.get(i, j));
        }
        smooth_sum.add(w);
    }
    const double smooth = norm / (2.0 * shift_denom(m)) * smooth_sum.value();

    const double c = kdep_c_term(profile, [&](int j) {
        double inner = 0.5 * (j >= 1 && j <= n ? profile.sq_means[static_cast<std::size_t>(j - 1)] : 0.0);
        for (int t = std::max(1, j - k + 1); t <= j - 1; ++t) {
            inner += std::abs(profile.covariances.get(j, t));
        }
        return inner;
    });

    BoundReport r = make_report(c, smooth, norm, method, profile.lambda(), valid);
    r.notes.push_back("quadrant-dependence (PQD/NQD) declared by caller, not verified");
    if (!valid) {
        r.notes.push_back("hypothesis m < log 2 violated; formula value reported anyway");
    }
    return r;
}

BoundReport ub_cp_kdep_general(const KdepGeneralInputs& in, double norm, NormMethod method) {
    const std::size_t n = in.ps.size();
    require(in.k >= 1, "ub_cp_kdep_general: k must be >= 1");
    require(in.zeta_terms.size() == n && in.dtv_prefix_terms.size() == n &&
                in.window_joint.size() == n,
            "ub_cp_kdep_general: sequence lengths differ");
    require(norm >= 0.0, "ub_cp_kdep_general: norm must be >= 0");

    LocalDepProfile shim;  // reuse p(i)/m_hypothesis index conventions
    shim.k = in.k;
    shim.ps = in.ps;
    shim.means.assign(n, 0.0);
    shim.sq_means.assign(n, 0.0);
    const double m = shim.m_hypothesis();
    const bool valid = m < kLog2;
    const int k = in.k;

    detail::NeumaierSum smooth_sum;
    for (double z : in.zeta_terms) {
        require(z >= 0.0, "ub_cp_kdep_general: zeta terms must be >= 0");
        smooth_sum.add(z);
    }
    const double smooth = norm / (2.0 * shift_denom(m)) * smooth_sum.value();

    detail::NeumaierSum cn;
    for (int i = 1; i <= static_cast<int>(n); ++i) {
        double first = in.dtv_prefix_terms[static_cast<std::size_t>(i - 1)];
        for (int j = std::max(1, i - 3 * k + 3); j <= i - 2 * k + 1; ++j) first += shim.p(j);

        double window_p = 0.0;
        for (int j = std::max(1, i - k + 1); j <= i - 1; ++j) window_p += shim.p(j);
        const double pi = shim.p(i);
        const double second =
            2.0 * in.window_joint[static_cast<std::size_t>(i - 1)] + 2.0 * pi * window_p + pi * pi;
        cn.add(first * second);
    }
    const double c = 2.0 * cn.value();

    BoundReport r = make_report(c, smooth, norm, method, detail::sum(in.ps), valid);
    if (!valid) {
        r.notes.push_back("hypothesis m < log 2 violated; formula value reported anyway");
    }
    return r;
}

}  // namespace cpx
