/*
 * ordstat - estimation of sorted data from sorted noisy observations.
 *
 * C interface to the core library: opaque handles plus status codes. All
 * functions returning ordstat_status leave outputs untouched on failure.
 * Handles are created by *_create functions and released by the matching
 * *_destroy; destroy functions accept NULL.
 */
#ifndef ORDSTAT_H
#define ORDSTAT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ordstat_status {
  ORDSTAT_OK = 0,
  ORDSTAT_ERR_ARGUMENT = 1, /* bad call arguments (lengths, null pointers) */
  ORDSTAT_ERR_DOMAIN = 2,   /* scalar argument outside its domain */
  ORDSTAT_ERR_CONFIG = 3,   /* inconsistent component configuration */
  ORDSTAT_ERR_NUMERIC = 4   /* numeric failure inside a computation */
} ordstat_status;

const char* ordstat_status_message(ordstat_status status);
const char* ordstat_version(void);

/* ------------------------------------------------------------------ */
/* Scalar special functions                                           */
/* ------------------------------------------------------------------ */

double ordstat_std_normal_pdf(double x);
double ordstat_std_normal_cdf(double x);
/* Requires 0 < p < 1. */
ordstat_status ordstat_std_normal_quantile(double p, double* out);

/* ------------------------------------------------------------------ */
/* Model and region integrator                                        */
/* ------------------------------------------------------------------ */

typedef struct ordstat_model ordstat_model;
typedef struct ordstat_integrator ordstat_integrator;

/* Prior N(0, I_n), channel Y = X + sigma Z. n >= 1, sigma >= 0. */
ordstat_status ordstat_model_create(int32_t n, double sigma, ordstat_model** out);
void ordstat_model_destroy(ordstat_model* model);

/* Closed-form ordered-region functionals; valid only for n == 2. */
ordstat_status ordstat_integrator_create_exact_n2(uint64_t seed, ordstat_integrator** out);
/* Posterior Monte Carlo with `samples` draws per evaluation. */
ordstat_status ordstat_integrator_create_monte_carlo(int32_t samples, uint64_t seed,
                                                     ordstat_integrator** out);
void ordstat_integrator_destroy(ordstat_integrator* integ);

/* P[X in sorted region | Y = y]; y has model dimension. */
ordstat_status ordstat_ordered_region_prob(const ordstat_model* model,
                                           const ordstat_integrator* integ, const double* y,
                                           int32_t len, uint64_t stream, double* out);

/* E[X 1{X in sorted region} | Y = y], written to out[0..len). */
ordstat_status ordstat_restricted_mean(const ordstat_model* model,
                                       const ordstat_integrator* integ, const double* y,
                                       int32_t len, uint64_t stream, double* out);

/* ------------------------------------------------------------------ */
/* Estimators                                                         */
/* ------------------------------------------------------------------ */

typedef enum ordstat_estimator_kind {
  ORDSTAT_EST_OPTIMAL = 0,
  ORDSTAT_EST_FHAT = 1,
  ORDSTAT_EST_HHAT = 2,
  ORDSTAT_EST_MLE = 3,
  ORDSTAT_EST_IDENTITY = 4
} ordstat_estimator_kind;

typedef struct ordstat_fixed_point_options {
  int32_t max_iters;
  double tolerance;
  int32_t restarts;
  double damping;
} ordstat_fixed_point_options;

void ordstat_fixed_point_defaults(ordstat_fixed_point_options* out);

/*
 * Applies one estimator to a nondecreasing observation y_sorted of length
 * len == model dimension. integ is required for OPTIMAL and FHAT and ignored
 * otherwise (may be NULL then); fp may be NULL for defaults (used by MLE).
 */
ordstat_status ordstat_estimate(const ordstat_model* model, const ordstat_integrator* integ,
                                ordstat_estimator_kind kind, const double* y_sorted, int32_t len,
                                uint64_t stream, const ordstat_fixed_point_options* fp,
                                double* out);

/* ------------------------------------------------------------------ */
/* Bounds and order statistic moments                                 */
/* ------------------------------------------------------------------ */

/* Means of the n ascending order statistics; out has length n.
 * quad_points == 0 selects the default rule. 1 <= n <= 1000. */
ordstat_status ordstat_order_statistic_means(int32_t n, int32_t quad_points, double* out);
ordstat_status ordstat_var_sorted(int32_t n, int32_t quad_points, double* out);
ordstat_status ordstat_quantile_mean_approx(int32_t i, int32_t n, double* out);
ordstat_status ordstat_quantile_mean_error_bound(int32_t i, int32_t n, double* out);
ordstat_status ordstat_var_approx(int32_t n, double* out);
ordstat_status ordstat_var_approx_error_bound(int32_t n, double* out);
ordstat_status ordstat_chi_variance(int32_t n, double* out);
ordstat_status ordstat_max_entropy_mmse_bound(int32_t n, double sigma, double* out);
ordstat_status ordstat_max_entropy_var_bound(int32_t n, double* out);
ordstat_status ordstat_sorted_entropy(int32_t n, double* out);
ordstat_status ordstat_quantile_power_sum_bound(int32_t n, double eps, double* out);

/* ------------------------------------------------------------------ */
/* Monte Carlo evaluation                                             */
/* ------------------------------------------------------------------ */

typedef struct ordstat_eval_config {
  int64_t outer_samples;
  int32_t chunks;
  uint64_t seed;
  int32_t threads; /* 0: ORDSTAT_THREADS env, then all cores */
} ordstat_eval_config;

void ordstat_eval_defaults(ordstat_eval_config* out);

typedef struct ordstat_mc_result {
  double mean;
  double std_error;
  int64_t samples;
} ordstat_mc_result;

/* MSE of one estimator of sort(X) from sort(Y); deterministic given config. */
ordstat_status ordstat_mse_of_estimator(const ordstat_model* model,
                                        const ordstat_integrator* integ,
                                        ordstat_estimator_kind kind,
                                        const ordstat_eval_config* config,
                                        ordstat_mc_result* out);

/* Pooled combination of two results for the same estimand. */
void ordstat_merge_results(const ordstat_mc_result* a, const ordstat_mc_result* b,
                           ordstat_mc_result* out);

/* Upper bound on fhat's excess MSE; requires sigma > 0. */
ordstat_status ordstat_delta_up(const ordstat_model* model, const ordstat_integrator* integ,
                                const ordstat_eval_config* config, ordstat_mc_result* out);

/* n (1 - 1/n!), the high-noise limit of delta_up. */
ordstat_status ordstat_delta_up_asymptote(int32_t n, double* out);

/* n sigma^2 / (1 + sigma^2), the MMSE of the unsorted problem. */
ordstat_status ordstat_mmse_unsorted(int32_t n, double sigma, double* out);

/* Conditional score mean at the origin for the n = 2, sigma = 1 model
 * (components approach +/- 2/sqrt(2 pi), violating the Bayesian Cramer-Rao
 * regularity condition). Arrays hold 2 entries. */
ordstat_status ordstat_regularity_check(const ordstat_model* model,
                                        const ordstat_eval_config* config,
                                        double components[2], double std_errors[2]);

/* Same quantity by direct quadrature over the sorted region. */
ordstat_status ordstat_regularity_check_quadrature(const ordstat_model* model,
                                                   double components[2]);

/* ------------------------------------------------------------------ */
/* Sweep tables                                                       */
/* ------------------------------------------------------------------ */

typedef struct ordstat_sweep_table ordstat_sweep_table;

/*
 * MSE of every estimator in `estimators` at every sigma in `sigmas`.
 * The integrator describes the inner region integration (ExactN2 is only
 * legal when n == 2).
 */
ordstat_status ordstat_sweep_run(int32_t n, const double* sigmas, int32_t sigma_count,
                                 const ordstat_estimator_kind* estimators,
                                 int32_t estimator_count, const ordstat_integrator* integ,
                                 const ordstat_eval_config* config, ordstat_sweep_table** out);

int32_t ordstat_sweep_row_count(const ordstat_sweep_table* table);

/* Reference columns of one row. Any output pointer may be NULL. */
ordstat_status ordstat_sweep_row_refs(const ordstat_sweep_table* table, int32_t row,
                                      double* sigma, double* var_sorted, double* mmse_unsorted);

/* Result for (row, estimator); ORDSTAT_ERR_ARGUMENT if not computed. */
ordstat_status ordstat_sweep_get(const ordstat_sweep_table* table, int32_t row,
                                 ordstat_estimator_kind kind, ordstat_mc_result* out);

void ordstat_sweep_destroy(ordstat_sweep_table* table);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* ORDSTAT_H */
