/* C interface to the compound Poisson approximation bounds library.
 *
 * All functions return a cpx_status; outputs go through pointers. On any
 * failure the return is nonzero and cpx_last_error() describes it (the
 * message is thread-local and valid until the next failing call on the same
 * thread). Strings returned through char** are heap-allocated; release them
 * with cpx_string_free. Pmf handles are opaque; release with cpx_pmf_free.
 */
#ifndef CPAPPROX_CAPI_H
#define CPAPPROX_CAPI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CPX_API __declspec(dllexport)
#else
#define CPX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cpx_status {
    CPX_OK = 0,
    CPX_ERR_INVALID_ARGUMENT = 1,
    CPX_ERR_NUMERIC = 2,
    CPX_ERR_JSON = 3,
    CPX_ERR_INTERNAL = 4
} cpx_status;

typedef struct cpx_pmf cpx_pmf;

CPX_API const char* cpx_last_error(void);
CPX_API void cpx_string_free(char* s);
CPX_API void cpx_pmf_free(cpx_pmf* p);

/* --- pmf constructors ---------------------------------------------------- */

CPX_API cpx_status cpx_pmf_point_mass(int64_t x, cpx_pmf** out);
CPX_API cpx_status cpx_pmf_poisson(double rate, double eps, cpx_pmf** out);
CPX_API cpx_status cpx_pmf_geometric(double p, double eps, cpx_pmf** out);
CPX_API cpx_status cpx_pmf_truncated_geometric(double p, int64_t k, cpx_pmf** out);
CPX_API cpx_status cpx_pmf_polya_aeppli(double lambda, double p, double eps, cpx_pmf** out);
CPX_API cpx_status cpx_pmf_compound_poisson(double rate, const cpx_pmf* severity, double eps,
                                            cpx_pmf** out);
CPX_API cpx_status cpx_pmf_poisson_binomial(const double* ps, size_t n, cpx_pmf** out);
CPX_API cpx_status cpx_pmf_convolve(const cpx_pmf* a, const cpx_pmf* b, cpx_pmf** out);
CPX_API cpx_status cpx_pmf_mixture(const double* weights, const cpx_pmf* const* parts, size_t n,
                                   cpx_pmf** out);

/* --- pmf accessors -------------------------------------------------------- */

CPX_API cpx_status cpx_pmf_offset(const cpx_pmf* p, int64_t* out);
CPX_API cpx_status cpx_pmf_size(const cpx_pmf* p, size_t* out);
CPX_API cpx_status cpx_pmf_deficit(const cpx_pmf* p, double* out);
CPX_API cpx_status cpx_pmf_prob_at(const cpx_pmf* p, int64_t k, double* out);
CPX_API cpx_status cpx_pmf_moments(const cpx_pmf* p, double* mean, double* second_raw,
                                   double* variance);
/* JSON shape: {"offset": int, "probs": [...], "deficit": real}, probabilities
 * printed at 17 significant digits. */
CPX_API cpx_status cpx_pmf_to_json(const cpx_pmf* p, char** out);
CPX_API cpx_status cpx_pmf_from_json(const char* json_text, cpx_pmf** out);

/* --- probability metrics --------------------------------------------------- */

CPX_API cpx_status cpx_tv_distance(const cpx_pmf* a, const cpx_pmf* b, double* value,
                                   double* error_bar);
CPX_API cpx_status cpx_zeta2(const cpx_pmf* a, const cpx_pmf* b, double mean_tol, double* value,
                             double* error_bar);

/* --- smoothness factors ---------------------------------------------------- */

CPX_API cpx_status cpx_numeric_delta1_sup(const cpx_pmf* p, double* out);
CPX_API cpx_status cpx_numeric_delta2_l1(const cpx_pmf* p, double* out);
CPX_API cpx_status cpx_poisson_delta1_sup_exact(double lambda, double* out);
CPX_API cpx_status cpx_poisson_delta2_l1_exact(double lambda, double* out);
CPX_API cpx_status cpx_poisson_delta2_l1_crude(double lambda, double* out);
CPX_API cpx_status cpx_normal_heuristic_delta2(double lambda, double second_raw_severity,
                                               double* out);

/* --- run statistics -------------------------------------------------------- */

CPX_API cpx_status cpx_exact_run_count_pmf(int64_t n, int64_t k, double p, int64_t cap,
                                           cpx_pmf** out);
CPX_API cpx_status cpx_enumerate_run_count_pmf(int64_t n, int64_t k, double p, cpx_pmf** out);
CPX_API cpx_status cpx_runs_declumping(int64_t n, int64_t k, double p, double* out);
CPX_API cpx_status cpx_runs_swap(double lambda, int64_t n, int64_t k, double p, double* out);
CPX_API cpx_status cpx_runs_cp_norm(int64_t n, int64_t k, double p, double eps, double* out);
/* has_po / has_cp are 0 when the comparator is absent (p outside its range). */
CPX_API cpx_status cpx_runs_stein_chen(int64_t n, int64_t k, double p, double* po, int* has_po,
                                       double* cp, int* has_cp);

/* --- command-level reports (JSON in / JSON out) ---------------------------- */

/* kind: po-independent | cp-independent | po-iid-refined | kdep-moments |
 *       kdep-quadrant | kdep-general | runs-po | runs-cp | runs-cp-improved |
 *       runs-total
 * params_json per kind (all numbers optional unless noted):
 *   po-independent:  {"ps": [...] (required), "norm": real}
 *   cp-independent:  {"profile": {...} (required), "norm": real, "eps": real}
 *   po-iid-refined:  {"n": int, "p": real (both required)}
 *   kdep-moments / kdep-quadrant:
 *                    {"profile": {...} (required), "norm": real, "eps": real,
 *                     "poisson_norm": bool}
 *   kdep-general:    {"inputs": {...}, "norm": real (both required)}
 *   runs-po:         {"n": int, "k": int, "p": real (required)}
 *   runs-cp / runs-cp-improved / runs-total:
 *                    {"n": int, "k": int, "p": real (required), "norm": real,
 *                     "eps": real}
 * On success *valid reflects the bound's hypothesis flag. */
CPX_API cpx_status cpx_bound_report(const char* kind, const char* params_json, char** report_json,
                                    int* valid);

/* params: {"lambda": real (required), "geom_p": real, "trunc_k": int,
 *          "severity": pmf json, "eps": real} */
CPX_API cpx_status cpx_norms_report(const char* params_json, char** report_json);

CPX_API cpx_status cpx_table1_report(double eps, char** report_json);

/* suite: lemmas | runs | table1 | all. *failures receives the total count of
 * failed cases across the selected suites. */
CPX_API cpx_status cpx_verify_report(const char* suite, uint64_t seed, int64_t cap, double eps,
                                     char** report_json, int* failures);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* CPAPPROX_CAPI_H */
