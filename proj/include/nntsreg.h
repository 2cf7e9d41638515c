/* nntsreg: circular regression with nonnegative trigonometric sum densities.
 *
 * C interface to the shared library. All functions return a status code
 * (NNTSREG_OK on success); results are written through out-parameters.
 * Handles are opaque and owned by the caller via the matching _free call.
 * Strings returned through char** are heap-allocated; release them with
 * nntsreg_string_free.
 */
#ifndef NNTSREG_H
#define NNTSREG_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
  NNTSREG_OK = 0,
  NNTSREG_EINVAL = 1,   /* invalid argument or precondition violation */
  NNTSREG_EDOMAIN = 2,  /* result undefined for these inputs */
  NNTSREG_ENUMERIC = 3, /* numerical failure (singular design, ...) */
  NNTSREG_EPARSE = 4    /* malformed JSON or report */
};

/* Short description of a status code. */
const char* nntsreg_strerror(int code);
/* Detail message from the most recent failing call on this thread. */
const char* nntsreg_last_error(void);

void nntsreg_string_free(char* s);

/* ---- NNTS density family ---- */

typedef struct nntsreg_params nntsreg_params;

/* Creates a density from complex coefficients c_0..c_m (re/im arrays of
 * length m+1). The vector must be unit norm within 1e-6; it is canonicalized
 * so c_0 is real nonnegative. */
int nntsreg_params_create(int m, const double* re, const double* im,
                          nntsreg_params** out);
int nntsreg_params_uniform(nntsreg_params** out);
void nntsreg_params_free(nntsreg_params* p);

int nntsreg_params_m(const nntsreg_params* p);
/* Canonical coefficients, written to arrays of length m+1. */
int nntsreg_params_coeffs(const nntsreg_params* p, double* re, double* im);

int nntsreg_density(const nntsreg_params* p, double theta, double* out);
int nntsreg_cdf(const nntsreg_params* p, double theta, double* out);
int nntsreg_sample(const nntsreg_params* p, size_t n, uint64_t seed,
                   double* out);
int nntsreg_loglik(const nntsreg_params* p, const double* thetas, size_t n,
                   double* out);
int nntsreg_first_trig_moment(const nntsreg_params* p, double* re, double* im);
/* Mean direction of the density in [0, 2*pi); NNTSREG_EDOMAIN when the
 * resultant length vanishes. */
int nntsreg_point_predict(const nntsreg_params* p, double* out);

/* ---- uniformity tests on [0,1] values ---- */

int nntsreg_kuiper_test(const double* u, size_t n, double* stat, double* p);
int nntsreg_watson_test(const double* u, size_t n, double* stat, double* p);
int nntsreg_range_test(const double* u, size_t n, double* stat, double* p);
int nntsreg_bh_adjust(const double* p, size_t n, double* out);

/* ---- time-series diagnostics ---- */

/* acf has length max_lag+1 (lag 0 first), pacf length max_lag. */
int nntsreg_acf_pacf(const double* y, size_t n, int max_lag, double* acf,
                     double* pacf);

/* ---- fitting pipeline ---- */

typedef struct nntsreg_report nntsreg_report;

typedef struct {
  int m_min;
  int m_max;
  int circle;        /* 0 great, 1 small */
  int ar_order;      /* > 0 selects the autoregressive path */
  double enet_alpha; /* < 0 plain least squares, else elastic-net mixing */
  int lambda_rule;   /* 0 lambda_min, 1 lambda_1se */
  uint64_t seed;
} nntsreg_fit_options;

/* Fills in the defaults (great circle, M = 1..5, least squares). */
void nntsreg_fit_options_init(nntsreg_fit_options* opts);

/* Fits one model per M. thetas: n angles in radians. x: row-major n*p design
 * (may be NULL with p = 0 for the AR path). colnames: p names or NULL. */
int nntsreg_fit(const double* thetas, size_t n, const double* x, size_t p,
                const char* const* colnames, const nntsreg_fit_options* opts,
                nntsreg_report** out);
void nntsreg_report_free(nntsreg_report* r);

int nntsreg_report_to_json(const nntsreg_report* r, char** out);
int nntsreg_report_from_json(const char* json, nntsreg_report** out);
int nntsreg_report_num_rows(const nntsreg_report* r);
int nntsreg_report_num_coefs(const nntsreg_report* r, int row);

typedef struct {
  int m;
  double alpha; /* small-circle colatitude, 0 for great circles */
  double ssc;
  double r2cos;
  double r2;
  double loglik;
  double lambda;
  double range_stat, range_p;
  double kuiper_stat, kuiper_p;
  double watson_stat, watson_p;
  int selected;
  int excluded;
  int degenerate;
  double uniform_loglik;
} nntsreg_row_stats;

int nntsreg_report_row_stats(const nntsreg_report* r, int row,
                             nntsreg_row_stats* out);
/* Arrays of length nntsreg_report_num_coefs; se/pval may be NULL (and are
 * zero-filled for regularized fits). */
int nntsreg_report_row_coefs(const nntsreg_report* r, int row, double* beta,
                             double* se, double* pval);

/* Transformed linear variable for the fitted frame of a row; y and branch
 * have length n. branch = 0 flags an undefined (infinite) y. */
int nntsreg_report_transform(const nntsreg_report* r, int row,
                             const double* thetas, size_t n, double* y,
                             int* branch);

/* Density forecast at a covariate vector (regression path) or at a vector of
 * lagged transformed values (AR path). branch: 0 combined (default for small
 * circles), +1/-1 one small-circle branch. */
int nntsreg_forecast(const nntsreg_report* r, int row, const double* x,
                     size_t p, int branch, nntsreg_params** out);

/* In-sample validation of one fitted row against data: writes a JSON object
 * with the PIT series, log-likelihood, and the three uniformity tests. */
int nntsreg_validate(const nntsreg_report* r, int row, const double* thetas,
                     const double* x, size_t n, size_t p, char** out);

/* ---- Monte Carlo study ---- */

/* config: JSON object with keys m, n, circle ("great"/"small"), beta (array
 * of numbers or nulls for dropped columns), replicates, seed, eigenvectors
 * ("known"/"estimated"), small_alpha, allow_high_m_estimated.
 * Writes a JSON object with mean |beta|, rejection and acceptance rates. */
int nntsreg_run_study(const char* config, char** out);

#ifdef __cplusplus
}
#endif

#endif /* NNTSREG_H */
