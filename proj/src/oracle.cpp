#include "cpapprox/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

#include "cpapprox/detail/summation.hpp"
#include "cpapprox/metrics.hpp"
#include "cpapprox/smoothness.hpp"

namespace cpx {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

constexpr double kCheckSlack = 1e-12;

}  // namespace

void JointPmf::validate() const {
    require(!atoms.empty(), "JointPmf: no atoms");
    require(atoms.size() <= 10000, "JointPmf: support too large");
    detail::NeumaierSum total;
    for (const Atom& a : atoms) {
        require(a.prob >= 0.0 && std::isfinite(a.prob), "JointPmf: bad probability");
        require(a.x >= 0 && a.z >= 0, "JointPmf: points must be non-negative");
        total.add(a.prob);
    }
    require(std::abs(total.value() - 1.0) <= 1e-12, "JointPmf: probabilities must sum to 1");
}

namespace {

IntPmf marginal(const std::vector<JointPmf::Atom>& atoms, bool first) {
    std::map<std::int64_t, double> acc;
    for (const auto& a : atoms) acc[first ? a.x : a.z] += a.prob;
    const std::int64_t lo = acc.begin()->first;
    const std::int64_t hi = acc.rbegin()->first;
    std::vector<double> probs(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (const auto& [k, v] : acc) probs[static_cast<std::size_t>(k - lo)] = v;
    return IntPmf(lo, std::move(probs), IntPmf::TotalMass::exhaustive);
}

}  // namespace

IntPmf JointPmf::marginal_x() const { return marginal(atoms, true); }
IntPmf JointPmf::marginal_z() const { return marginal(atoms, false); }

double JointPmf::mean_x() const {
    detail::NeumaierSum s;
    for (const Atom& a : atoms) s.add(a.prob * static_cast<double>(a.x));
    return s.value();
}

double JointPmf::mean_z() const {
    detail::NeumaierSum s;
    for (const Atom& a : atoms) s.add(a.prob * static_cast<double>(a.z));
    return s.value();
}

double JointPmf::mean_xz() const {
    detail::NeumaierSum s;
    for (const Atom& a : atoms) s.add(a.prob * static_cast<double>(a.x) * static_cast<double>(a.z));
    return s.value();
}

IntPmf exact_run_count_pmf(const RunsConfig& cfg, std::int64_t cap) {
    cfg.validate();
    require(cfg.n <= cap, "exact_run_count_pmf: n exceeds cap");
    const std::size_t k = static_cast<std::size_t>(cfg.k);
    const std::size_t maxc = static_cast<std::size_t>(cfg.windows());
    const double p = cfg.p;
    const double q = 1.0 - p;

    // state[s * (maxc + 1) + c]: current streak s (capped at k), count c
    const std::size_t counts = maxc + 1;
    std::vector<double> state((k + 1) * counts, 0.0);
    std::vector<double> next((k + 1) * counts, 0.0);
    state[0] = 1.0;
    for (std::int64_t trial = 0; trial < cfg.n; ++trial) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t s = 0; s <= k; ++s) {
            const std::size_t s_succ = std::min(s + 1, k);
            const std::size_t inc = (s + 1 >= k) ? 1 : 0;
            for (std::size_t c = 0; c <= maxc; ++c) {
                const double pr = state[s * counts + c];
                if (pr == 0.0) continue;
                next[c] += q * pr;  // streak resets to 0
                next[s_succ * counts + c + inc] += p * pr;
            }
        }
        state.swap(next);
    }
    std::vector<double> out(counts, 0.0);
    for (std::size_t s = 0; s <= k; ++s) {
        for (std::size_t c = 0; c <= maxc; ++c) out[c] += state[s * counts + c];
    }
    return IntPmf(0, std::move(out), IntPmf::TotalMass::exhaustive);
}

IntPmf enumerate_run_count_pmf(const RunsConfig& cfg) {
    cfg.validate();
    require(cfg.n <= 22, "enumerate_run_count_pmf: n too large for full enumeration");
    const int n = static_cast<int>(cfg.n);
    const int k = static_cast<int>(cfg.k);

    std::vector<double> pow_p(static_cast<std::size_t>(n + 1), 1.0);
    std::vector<double> pow_q(static_cast<std::size_t>(n + 1), 1.0);
    for (int i = 1; i <= n; ++i) {
        pow_p[static_cast<std::size_t>(i)] = pow_p[static_cast<std::size_t>(i - 1)] * cfg.p;
        pow_q[static_cast<std::size_t>(i)] = pow_q[static_cast<std::size_t>(i - 1)] * cfg.q();
    }

    std::vector<detail::NeumaierSum> buckets(static_cast<std::size_t>(cfg.windows() + 1));
    const std::uint64_t total = 1ULL << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        int ones = 0;
        int streak = 0;
        int count = 0;
        for (int i = 0; i < n; ++i) {
            if ((mask >> i) & 1ULL) {
                ++ones;
                if (++streak >= k) ++count;
            } else {
                streak = 0;
            }
        }
        buckets[static_cast<std::size_t>(count)].add(pow_p[static_cast<std::size_t>(ones)] *
                                                     pow_q[static_cast<std::size_t>(n - ones)]);
    }
    std::vector<double> out(buckets.size());
    for (std::size_t i = 0; i < buckets.size(); ++i) out[i] = buckets[i].value();
    return IntPmf(0, std::move(out), IntPmf::TotalMass::exhaustive);
}

InequalityCheck check_smoothing_inequality(const IntPmf& x, const IntPmf& y, const IntPmf& z) {
    const MetricValue lhs = tv_distance(convolve(x, z), convolve(y, z));
    const MetricValue zeta = zeta2(x, y);
    const double rhs = 0.5 * numeric_delta2_l1(z) * zeta.value;
    const double bars = lhs.error_bar + 0.5 * numeric_delta2_l1(z) * zeta.error_bar;
    return {lhs.value, rhs, lhs.value <= rhs + bars + kCheckSlack};
}

InequalityCheck check_product_coupling(const IntPmf& x, const IntPmf& y, const IntPmf& z,
                                       const IntPmf& w) {
    const MetricValue dz = tv_distance(convolve(z, x), convolve(z, y));
    const MetricValue dw = tv_distance(convolve(w, x), convolve(w, y));
    const MetricValue dxy = tv_distance(x, y);
    const MetricValue dzw = tv_distance(z, w);
    const double lhs = std::abs(dz.value - dw.value);
    const double rhs = 2.0 * dxy.value * dzw.value;
    const double bars = dz.error_bar + dw.error_bar +
                        2.0 * (dxy.error_bar * dzw.value + dzw.error_bar * dxy.value +
                               dxy.error_bar * dzw.error_bar);
    return {lhs, rhs, lhs <= rhs + bars + kCheckSlack};
}

InequalityCheck check_shift_inequality(const IntPmf& x, const IntPmf& y, const IntPmf& w) {
    const double w0 = w.at(0);
    require(w0 > 0.5, "check_shift_inequality: needs P(W != 0) < 1/2");
    const MetricValue lhs = tv_distance(x, y);
    const MetricValue shifted = tv_distance(convolve(x, w), convolve(y, w));
    const double factor = 1.0 / (2.0 * w0 - 1.0);
    const double rhs = factor * shifted.value;
    const double bars = lhs.error_bar + factor * shifted.error_bar;
    return {lhs.value, rhs, lhs.value <= rhs + bars + kCheckSlack};
}

InequalityCheck check_zeta2_cp_identity(const IndepProfile& profile) {
    profile.validate();
    require(profile.n() <= 8, "check_zeta2_cp_identity: profile too large");
    for (const IntPmf& sev : profile.severities) {
        require(sev.size() <= 5, "check_zeta2_cp_identity: severity support too large");
    }

    detail::NeumaierSum rhs_sum;
    for (double sq : profile.sq_means) rhs_sum.add(sq);
    const double rhs = 0.5 * rhs_sum.value();

    const double lam = profile.lambda();
    if (lam == 0.0) return {0.0, rhs, rhs == 0.0};

    IntPmf sum_law = IntPmf::point_mass(0);
    for (std::size_t i = 0; i < profile.n(); ++i) {
        const double p = profile.ps[i];
        const IntPmf& sev = profile.severities[i];
        // law of X_i: (1 - p) at 0 plus p * severity
        std::vector<double> probs(static_cast<std::size_t>(sev.max_support()) + 1, 0.0);
        probs[0] = 1.0 - p;
        for (std::size_t j = 0; j < sev.size(); ++j) {
            probs[static_cast<std::size_t>(sev.offset()) + j] += p * sev.probs()[j];
        }
        sum_law = convolve(sum_law, IntPmf(0, std::move(probs)));
    }

    const IntPmf cp = compound_poisson_pmf({lam, profile.compounding_mixture()}, 1e-13);
    const MetricValue z = zeta2(sum_law, cp);
    const double tol = z.error_bar + 1e-9;
    return {z.value, rhs, std::abs(z.value - rhs) <= tol};
}

InequalityCheck check_zeta2_coupling(const JointPmf& joint, const IntPmf& severity) {
    joint.validate();
    require(severity.offset() >= 1, "check_zeta2_coupling: severity must have mass on {1, 2, ...}");

    std::int64_t max_total = 0;
    for (const auto& a : joint.atoms) max_total = std::max(max_total, a.x + a.z);
    require(max_total <= 64, "check_zeta2_coupling: counts too large to lift exactly");

    // severity convolution powers: powers[j] = law of a sum of j severity draws
    std::vector<IntPmf> powers;
    powers.push_back(IntPmf::point_mass(0));
    for (std::int64_t j = 1; j <= max_total; ++j) {
        powers.push_back(convolve(powers.back(), severity));
    }

    // law of X' + Z' (each count lifted by i.i.d. severity draws)
    std::map<std::int64_t, double> both_acc;
    for (const auto& a : joint.atoms) {
        const IntPmf& lifted = powers[static_cast<std::size_t>(a.x + a.z)];
        for (std::size_t i = 0; i < lifted.size(); ++i) {
            both_acc[lifted.offset() + static_cast<std::int64_t>(i)] += a.prob * lifted.probs()[i];
        }
    }
    // laws of X' and Z' separately
    auto lift_marginal = [&](bool first) {
        std::map<std::int64_t, double> acc;
        for (const auto& a : joint.atoms) {
            const IntPmf& lifted = powers[static_cast<std::size_t>(first ? a.x : a.z)];
            for (std::size_t i = 0; i < lifted.size(); ++i) {
                acc[lifted.offset() + static_cast<std::int64_t>(i)] += a.prob * lifted.probs()[i];
            }
        }
        const std::int64_t lo = acc.begin()->first;
        const std::int64_t hi = acc.rbegin()->first;
        std::vector<double> probs(static_cast<std::size_t>(hi - lo + 1), 0.0);
        for (const auto& [k, v] : acc) probs[static_cast<std::size_t>(k - lo)] = v;
        return IntPmf(lo, std::move(probs));
    };

    const std::int64_t lo = both_acc.begin()->first;
    const std::int64_t hi = both_acc.rbegin()->first;
    std::vector<double> both_probs(static_cast<std::size_t>(hi - lo + 1), 0.0);
    for (const auto& [k, v] : both_acc) both_probs[static_cast<std::size_t>(k - lo)] = v;
    const IntPmf dependent_sum(lo, std::move(both_probs));

    const IntPmf independent_sum = convolve(lift_marginal(false), lift_marginal(true));

    const MetricValue z = zeta2(dependent_sum, independent_sum);
    const double sev_mean = moments(severity).mean;
    const double rhs =
        sev_mean * sev_mean * (joint.mean_xz() + joint.mean_x() * joint.mean_z());
    return {z.value, rhs, z.value <= rhs + z.error_bar + 1e-9};
}

}  // namespace cpx
