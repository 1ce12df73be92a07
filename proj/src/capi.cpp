#include "cpapprox/capi.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include <json.hpp>

#include "cpapprox/bounds.hpp"
#include "cpapprox/json_io.hpp"
#include "cpapprox/metrics.hpp"
#include "cpapprox/oracle.hpp"
#include "cpapprox/pmf.hpp"
#include "cpapprox/runs.hpp"
#include "cpapprox/smoothness.hpp"
#include "cpapprox/verify.hpp"

struct cpx_pmf {
    cpx::IntPmf value;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

cpx_status fail(cpx_status code, const std::string& message) {
    g_last_error = message;
    return code;
}

// Runs `body` and translates exceptions to status codes.
template <typename Fn>
cpx_status guarded(Fn&& body) {
    try {
        return body();
    } catch (const std::invalid_argument& e) {
        return fail(CPX_ERR_INVALID_ARGUMENT, e.what());
    } catch (const nlohmann::json::exception& e) {
        return fail(CPX_ERR_JSON, e.what());
    } catch (const std::runtime_error& e) {
        return fail(CPX_ERR_NUMERIC, e.what());
    } catch (const std::bad_alloc&) {
        return fail(CPX_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(CPX_ERR_INTERNAL, e.what());
    }
}

cpx_status require_arg(bool ok, const char* msg) {
    return ok ? CPX_OK : fail(CPX_ERR_INVALID_ARGUMENT, msg);
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

cpx_status emit_pmf(cpx::IntPmf pmf, cpx_pmf** out) {
    *out = new cpx_pmf{std::move(pmf)};
    return CPX_OK;
}

double get_or(const json& j, const char* field, double fallback) {
    return j.contains(field) ? j.at(field).get<double>() : fallback;
}

// Norm selection shared by the profile-based bound kinds: explicit value wins,
// otherwise the numeric norm of the approximating compound law (or the exact
// Poisson norm when asked).
std::pair<double, cpx::NormMethod> resolve_norm(const json& params, double lambda,
                                                const cpx::IntPmf* mixture, double eps) {
    if (params.contains("norm")) {
        return {params.at("norm").get<double>(), cpx::NormMethod::numeric};
    }
    if (params.value("poisson_norm", false) || mixture == nullptr) {
        return {cpx::poisson_delta2_l1_exact(lambda), cpx::NormMethod::exact_poisson};
    }
    const cpx::IntPmf cp = cpx::compound_poisson_pmf({lambda, *mixture}, eps);
    return {cpx::numeric_delta2_l1(cp), cpx::NormMethod::numeric};
}

cpx::BoundReport eval_bound(const std::string& kind, const json& params, json& inputs_echo) {
    const double eps = get_or(params, "eps", cpx::kDefaultEps);
    inputs_echo = params;

    if (kind == "po-independent") {
        const cpx::BernoulliProfile profile = cpx::bernoulli_profile_from_json(params);
        double norm;
        cpx::NormMethod method;
        if (params.contains("norm")) {
            norm = params.at("norm").get<double>();
            method = cpx::NormMethod::numeric;
        } else {
            double lambda = 0.0;
            for (double p : profile.ps) lambda += p;
            norm = cpx::poisson_delta2_l1_exact(lambda);
            method = cpx::NormMethod::exact_poisson;
        }
        return cpx::ub_po_bernoulli(profile, norm, method);
    }
    if (kind == "cp-independent") {
        const cpx::IndepProfile profile = cpx::indep_profile_from_json(params.at("profile"));
        const cpx::IntPmf mixture = profile.compounding_mixture();
        const auto [norm, method] = resolve_norm(params, profile.lambda(), &mixture, eps);
        return cpx::ub_cp_independent(profile, norm, method);
    }
    if (kind == "po-iid-refined") {
        return cpx::ub_po_iid_refined(params.at("n").get<std::int64_t>(),
                                      params.at("p").get<double>());
    }
    if (kind == "kdep-moments" || kind == "kdep-quadrant") {
        const cpx::LocalDepProfile profile =
            cpx::local_dep_profile_from_json(params.at("profile"));
        const bool want_poisson = params.value("poisson_norm", false);
        cpx::IntPmf mixture;
        const cpx::IntPmf* mixture_ptr = nullptr;
        if (!want_poisson && !profile.severities.empty()) {
            mixture = profile.compounding_mixture();
            mixture_ptr = &mixture;
        } else if (!want_poisson && !params.contains("norm")) {
            throw std::invalid_argument(
                "profile has no severities; pass \"norm\" or \"poisson_norm\": true");
        }
        const auto [norm, method] = resolve_norm(params, profile.lambda(), mixture_ptr, eps);
        return kind == "kdep-moments" ? cpx::ub_cp_kdep_moments(profile, norm, method)
                                      : cpx::ub_cp_kdep_quadrant(profile, norm, method);
    }
    if (kind == "kdep-general") {
        const cpx::KdepGeneralInputs in = cpx::kdep_general_inputs_from_json(params.at("inputs"));
        return cpx::ub_cp_kdep_general(in, params.at("norm").get<double>());
    }
    if (kind == "runs-po" || kind == "runs-cp" || kind == "runs-cp-improved" ||
        kind == "runs-total") {
        const cpx::RunsConfig cfg{params.at("n").get<std::int64_t>(),
                                  params.at("k").get<std::int64_t>(), params.at("p").get<double>()};
        if (kind == "runs-po") {
            return cpx::runs_po_bound(cfg);
        }
        if (kind == "runs-total") {
            if (params.contains("norm")) {
                return cpx::total_pa_bound(cfg, params.at("norm").get<double>(),
                                           cpx::NormMethod::numeric);
            }
            return cpx::total_pa_bound(cfg, eps);
        }
        const double norm = params.contains("norm") ? params.at("norm").get<double>()
                                                    : cpx::runs_cp_norm(cfg, eps);
        return kind == "runs-cp" ? cpx::runs_cp_bound(cfg, norm)
                                 : cpx::runs_cp_bound_improved(cfg, norm);
    }
    throw std::invalid_argument("unknown bound kind: " + kind);
}

}  // namespace

extern "C" {

const char* cpx_last_error(void) { return g_last_error.c_str(); }

void cpx_string_free(char* s) { delete[] s; }

void cpx_pmf_free(cpx_pmf* p) { delete p; }

cpx_status cpx_pmf_point_mass(int64_t x, cpx_pmf** out) {
    if (cpx_status s = require_arg(out != nullptr, "out is null")) return s;
    return guarded([&] { return emit_pmf(cpx::IntPmf::point_mass(x), out); });
}

cpx_status cpx_pmf_poisson(double rate, double eps, cpx_pmf** out) {
    if (cpx_status s = require_arg(out != nullptr, "out is null")) return s;
    return guarded([&] { return emit_pmf(cpx::poisson_pmf(rate, eps), out); });
}

cpx_status cpx_pmf_geometric(double p, double eps, cpx_pmf** out) {
    if (cpx_status s = require_arg(out != nullptr, "out is null")) return s;
    return guarded([&] { return emit_pmf(cpx::geometric_pmf(p, eps), out); });
}

cpx_status cpx_pmf_truncated_geometric(double p, int64_t k, cpx_pmf** out) {
    if (cpx_status s = require_arg(out != nullptr, "out is null")) return s;
    return guarded([&] { return emit_pmf(cpx::truncated_geometric_pmf(p, k), out); });
}

cpx_status cpx_pmf_polya_aeppli(double lambda, double p, double eps, cpx_pmf** out) {
    if (cpx_status s = require_arg(out != nullptr, "out is null")) return s;
    return guarded([&] { return emit_pmf(cpx::polya_aeppli_pmf(lambda, p, eps), out); });
}

cpx_status cpx_pmf_compound_poisson(double rate, const cpx_pmf* severity, double eps,
                                    cpx_pmf** out) {
    if (cpx_status s = require_arg(out != nullptr && severity != nullptr, "null argument"))
        return s;
    return guarded(
        [&] { return emit_pmf(cpx::compound_poisson_pmf({rate, severity->value}, eps), out); });
}

cpx_status cpx_pmf_poisson_binomial(const double* ps, size_t n, cpx_pmf** out) {
    if (cpx_status s = require_arg(out != nullptr && (ps != nullptr || n == 0), "null argument"))
        return s;
    return guarded([&] { return emit_pmf(cpx::poisson_binomial_pmf({ps, n}), out); });
}

cpx_status cpx_pmf_convolve(const cpx_pmf* a, const cpx_pmf* b, cpx_pmf** out) {
    if (cpx_status s = require_arg(a != nullptr && b != nullptr && out != nullptr, "null argument"))
        return s;
    return guarded([&] { return emit_pmf(cpx::convolve(a->value, b->value), out); });
}

cpx_status cpx_pmf_mixture(const double* weights, const cpx_pmf* const* parts, size_t n,
                           cpx_pmf** out) {
    if (cpx_status s = require_arg(weights != nullptr && parts != nullptr && n > 0 &&
                                       out != nullptr,
                                   "null argument"))
        return s;
    return guarded([&] {
        std::vector<cpx::IntPmf> owned;
        owned.reserve(n);
        for (size_t i = 0; i < n; ++i) {
            if (parts[i] == nullptr) throw std::invalid_argument("null pmf in mixture parts");
            owned.push_back(parts[i]->value);
        }
        return emit_pmf(cpx::mixture({weights, n}, owned), out);
    });
}

cpx_status cpx_pmf_offset(const cpx_pmf* p, int64_t* out) {
    if (cpx_status s = require_arg(p != nullptr && out != nullptr, "null argument")) return s;
    *out = p->value.offset();
    return CPX_OK;
}

cpx_status cpx_pmf_size(const cpx_pmf* p, size_t* out) {
    if (cpx_status s = require_arg(p != nullptr && out != nullptr, "null argument")) return s;
    *out = p->value.size();
    return CPX_OK;
}

cpx_status cpx_pmf_deficit(const cpx_pmf* p, double* out) {
    if (cpx_status s = require_arg(p != nullptr && out != nullptr, "null argument")) return s;
    *out = p->value.deficit();
    return CPX_OK;
}

cpx_status cpx_pmf_prob_at(const cpx_pmf* p, int64_t k, double* out) {
    if (cpx_status s = require_arg(p != nullptr && out != nullptr, "null argument")) return s;
    *out = p->value.at(k);
    return CPX_OK;
}

cpx_status cpx_pmf_moments(const cpx_pmf* p, double* mean, double* second_raw, double* variance) {
    if (cpx_status s = require_arg(p != nullptr && mean != nullptr && second_raw != nullptr &&
                                       variance != nullptr,
                                   "null argument"))
        return s;
    const cpx::Moments m = cpx::moments(p->value);
    *mean = m.mean;
    *second_raw = m.second_raw;
    *variance = m.variance;
    return CPX_OK;
}

cpx_status cpx_pmf_to_json(const cpx_pmf* p, char** out) {
    if (cpx_status s = require_arg(p != nullptr && out != nullptr, "null argument")) return s;
    return guarded([&] {
        *out = copy_string(cpx::dump_json(cpx::to_json(p->value)));
        return CPX_OK;
    });
}

cpx_status cpx_pmf_from_json(const char* json_text, cpx_pmf** out) {
    if (cpx_status s = require_arg(json_text != nullptr && out != nullptr, "null argument"))
        return s;
    return guarded(
        [&] { return emit_pmf(cpx::pmf_from_json(json::parse(json_text)), out); });
}

cpx_status cpx_tv_distance(const cpx_pmf* a, const cpx_pmf* b, double* value, double* error_bar) {
    if (cpx_status s = require_arg(a != nullptr && b != nullptr && value != nullptr &&
                                       error_bar != nullptr,
                                   "null argument"))
        return s;
    return guarded([&] {
        const cpx::MetricValue m = cpx::tv_distance(a->value, b->value);
        *value = m.value;
        *error_bar = m.error_bar;
        return CPX_OK;
    });
}

cpx_status cpx_zeta2(const cpx_pmf* a, const cpx_pmf* b, double mean_tol, double* value,
                     double* error_bar) {
    if (cpx_status s = require_arg(a != nullptr && b != nullptr && value != nullptr &&
                                       error_bar != nullptr,
                                   "null argument"))
        return s;
    return guarded([&] {
        const cpx::MetricValue m = cpx::zeta2(a->value, b->value, mean_tol);
        *value = m.value;
        *error_bar = m.error_bar;
        return CPX_OK;
    });
}

cpx_status cpx_numeric_delta1_sup(const cpx_pmf* p, double* out) {
    if (cpx_status s = require_arg(p != nullptr && out != nullptr, "null argument")) return s;
    return guarded([&] {
        *out = cpx::numeric_delta1_sup(p->value);
        return CPX_OK;
    });
}

cpx_status cpx_numeric_delta2_l1(const cpx_pmf* p, double* out) {
    if (cpx_status s = require_arg(p != nullptr && out != nullptr, "null argument")) return s;
    return guarded([&] {
        *out = cpx::numeric_delta2_l1(p->value);
        return CPX_OK;
    });
}

cpx_status cpx_poisson_delta1_sup_exact(double lambda, double* out) {
    if (cpx_status s = require_arg(out != nullptr, "out is null")) return s;
    return guarded([&] {
        *out = cpx::poisson_delta1_sup_exact(lambda);
        return CPX_OK;
    });
}

cpx_status cpx_poisson_delta2_l1_exact(double lambda, double* out) {
    if (cpx_status s = require_arg(out != nullptr, "out is null")) return s;
    return guarded([&] {
        *out = cpx::poisson_delta2_l1_exact(lambda);
        return CPX_OK;
    });
}

cpx_status cpx_poisson_delta2_l1_crude(double lambda, double* out) {
    if (cpx_status s = require_arg(out != nullptr, "out is null")) return s;
    return guarded([&] {
        *out = cpx::poisson_delta2_l1_crude(lambda);
        return CPX_OK;
    });
}

cpx_status cpx_normal_heuristic_delta2(double lambda, double second_raw_severity, double* out) {
    if (cpx_status s = require_arg(out != nullptr, "out is null")) return s;
    return guarded([&] {
        *out = cpx::normal_heuristic_delta2(lambda, second_raw_severity);
        return CPX_OK;
    });
}

cpx_status cpx_exact_run_count_pmf(int64_t n, int64_t k, double p, int64_t cap, cpx_pmf** out) {
    if (cpx_status s = require_arg(out != nullptr, "out is null")) return s;
    return guarded(
        [&] { return emit_pmf(cpx::exact_run_count_pmf({n, k, p}, cap), out); });
}

cpx_status cpx_enumerate_run_count_pmf(int64_t n, int64_t k, double p, cpx_pmf** out) {
    if (cpx_status s = require_arg(out != nullptr, "out is null")) return s;
    return guarded([&] { return emit_pmf(cpx::enumerate_run_count_pmf({n, k, p}), out); });
}

cpx_status cpx_runs_declumping(int64_t n, int64_t k, double p, double* out) {
    if (cpx_status s = require_arg(out != nullptr, "out is null")) return s;
    return guarded([&] {
        *out = cpx::declumping_bound({n, k, p});
        return CPX_OK;
    });
}

cpx_status cpx_runs_swap(double lambda, int64_t n, int64_t k, double p, double* out) {
    if (cpx_status s = require_arg(out != nullptr, "out is null")) return s;
    return guarded([&] {
        *out = cpx::compounding_swap_bound(lambda, {n, k, p});
        return CPX_OK;
    });
}

cpx_status cpx_runs_cp_norm(int64_t n, int64_t k, double p, double eps, double* out) {
    if (cpx_status s = require_arg(out != nullptr, "out is null")) return s;
    return guarded([&] {
        *out = cpx::runs_cp_norm({n, k, p}, eps);
        return CPX_OK;
    });
}

cpx_status cpx_runs_stein_chen(int64_t n, int64_t k, double p, double* po, int* has_po, double* cp,
                               int* has_cp) {
    if (cpx_status s = require_arg(po != nullptr && has_po != nullptr && cp != nullptr &&
                                       has_cp != nullptr,
                                   "null argument"))
        return s;
    return guarded([&] {
        const cpx::SteinChenComparators c = cpx::stein_chen_comparators({n, k, p});
        *has_po = c.po.has_value() ? 1 : 0;
        *po = c.po.value_or(0.0);
        *has_cp = c.cp.has_value() ? 1 : 0;
        *cp = c.cp.value_or(0.0);
        return CPX_OK;
    });
}

cpx_status cpx_bound_report(const char* kind, const char* params_json, char** report_json,
                            int* valid) {
    if (cpx_status s = require_arg(kind != nullptr && params_json != nullptr &&
                                       report_json != nullptr && valid != nullptr,
                                   "null argument"))
        return s;
    return guarded([&] {
        const json params = json::parse(params_json);
        cpx::Report report;
        report.command = "bound";
        json inputs_echo;
        const cpx::BoundReport bound = eval_bound(kind, params, inputs_echo);
        report.inputs = json{{"kind", kind}, {"params", inputs_echo}};
        report.results = json{{"bound", cpx::to_json(bound)}};
        if (!bound.valid) {
            report.warnings.push_back("bound hypothesis violated; result not certified");
        }
        *valid = bound.valid ? 1 : 0;
        *report_json = copy_string(cpx::dump_json(cpx::to_json(report)));
        return CPX_OK;
    });
}

cpx_status cpx_norms_report(const char* params_json, char** report_json) {
    if (cpx_status s =
            require_arg(params_json != nullptr && report_json != nullptr, "null argument"))
        return s;
    return guarded([&] {
        const json params = json::parse(params_json);
        const double lambda = params.at("lambda").get<double>();
        const double eps = get_or(params, "eps", cpx::kDefaultEps);

        cpx::Report report;
        report.command = "norms";
        report.inputs = params;

        json results;
        results["delta1_sup_exact"] =
            json{{"value", cpx::poisson_delta1_sup_exact(lambda)}, {"provenance", "formula"}};
        results["delta2_l1_exact"] =
            json{{"value", cpx::poisson_delta2_l1_exact(lambda)}, {"provenance", "formula"}};
        results["delta2_l1_crude"] =
            json{{"value", cpx::poisson_delta2_l1_crude(lambda)}, {"provenance", "formula"}};

        // Optional compound severity: geometric, truncated geometric, or explicit.
        cpx::IntPmf severity;
        bool have_severity = false;
        if (params.contains("severity")) {
            severity = cpx::pmf_from_json(params.at("severity"));
            have_severity = true;
        } else if (params.contains("geom_p")) {
            const double gp = params.at("geom_p").get<double>();
            if (params.contains("trunc_k")) {
                severity = cpx::truncated_geometric_pmf(gp, params.at("trunc_k").get<std::int64_t>());
            } else {
                severity =
                    cpx::geometric_pmf(gp, std::max(1e-300, eps / (2.0 * std::max(1.0, lambda))));
            }
            have_severity = true;
        }

        double second_raw = 1.0;  // unit severities: plain Poisson target
        if (have_severity) {
            const cpx::IntPmf cp = cpx::compound_poisson_pmf({lambda, severity}, eps);
            results["cp_numeric"] = json{{"delta1_sup", cpx::numeric_delta1_sup(cp)},
                                         {"delta2_l1", cpx::numeric_delta2_l1(cp)},
                                         {"provenance", "oracle"}};
            second_raw = cpx::moments(severity).second_raw;
        }
        results["normal_heuristic_delta2"] =
            json{{"value", cpx::normal_heuristic_delta2(lambda, second_raw)},
                 {"provenance", "formula"}};
        report.results = results;
        report.warnings.push_back(
            "normal_heuristic_delta2 is a heuristic, not a certified norm");

        *report_json = copy_string(cpx::dump_json(cpx::to_json(report)));
        return CPX_OK;
    });
}

cpx_status cpx_table1_report(double eps, char** report_json) {
    if (cpx_status s = require_arg(report_json != nullptr, "out is null")) return s;
    return guarded([&] {
        cpx::Report report;
        report.command = "table1";
        report.inputs = json{{"eps", eps}};
        json rows = json::array();
        for (const cpx::Table1Row& row : cpx::table1(eps)) rows.push_back(cpx::to_json(row));
        report.results = json{{"rows", rows}};
        *report_json = copy_string(cpx::dump_json(cpx::to_json(report)));
        return CPX_OK;
    });
}

cpx_status cpx_verify_report(const char* suite, uint64_t seed, int64_t cap, double eps,
                             char** report_json, int* failures) {
    if (cpx_status s = require_arg(suite != nullptr && report_json != nullptr &&
                                       failures != nullptr,
                                   "null argument"))
        return s;
    return guarded([&] {
        const std::string which = suite;
        std::vector<cpx::SuiteResult> results;
        if (which == "lemmas") {
            results = cpx::verify_lemma_suites(seed);
        } else if (which == "runs") {
            results.push_back(cpx::verify_runs_dominance_suite(cap, eps));
            results.push_back(cpx::verify_bernoulli_dominance_suite(seed));
            results.push_back(cpx::verify_cp_dominance_suite(seed));
        } else if (which == "table1") {
            results.push_back(cpx::verify_table1_suite(eps));
        } else if (which == "all") {
            results = cpx::verify_all(seed, cap, eps);
        } else {
            throw std::invalid_argument("unknown verify suite: " + which);
        }

        int total_failures = 0;
        json suites = json::array();
        for (const cpx::SuiteResult& r : results) {
            total_failures += r.failures;
            suites.push_back(cpx::to_json(r));
        }

        cpx::Report report;
        report.command = "verify";
        report.inputs = json{{"suite", which}, {"seed", seed}, {"cap", cap}, {"eps", eps}};
        report.results = json{{"suites", suites}, {"total_failures", total_failures}};
        if (total_failures > 0) report.warnings.push_back("verification failures present");
        *failures = total_failures;
        *report_json = copy_string(cpx::dump_json(cpx::to_json(report)));
        return CPX_OK;
    });
}

}  // extern "C"
