/*
 * jlp - Jeffreys-Lindley paradox toolkit, C interface.
 *
 * Point-null and interval-null Bayes factors for the normal model with
 * known variance, minimum-sample-size inversion, conflict-zone geometry,
 * seeded Monte Carlo, and a report engine producing CSV/JSON.
 *
 * Every function returns a jlp_status; results come back through out
 * parameters. Report runs are driven through an opaque jlp_run handle.
 */

#ifndef JLP_H
#define JLP_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum jlp_status {
  JLP_OK = 0,
  JLP_ERROR_USAGE = 2,          /* invalid or missing input */
  JLP_ERROR_NO_CONVERGENCE = 3, /* iteration/subdivision budget exhausted */
  JLP_ERROR_DOMAIN = 4,         /* mathematically out-of-domain request */
  JLP_ERROR_INTERNAL = 5
} jlp_status;

const char* jlp_version(void);

/* Human-readable message for the most recent failing scalar call on this
 * thread. Valid until the next failing call on the same thread. */
const char* jlp_last_error_message(void);

/* ---- special functions -------------------------------------------- */

jlp_status jlp_std_normal_cdf(double x, double* out);
jlp_status jlp_std_normal_quantile(double p, double* out);

/* ---- point-null quantities ----------------------------------------- */

jlp_status jlp_just_significant_mean(double theta0, double sigma, uint64_t n,
                                     double alpha, double* out);
jlp_status jlp_lindley_posterior(double c, double z, double sigma, uint64_t n,
                                 double* out);
jlp_status jlp_bartlett_posterior(double c, double z, double sigma, uint64_t n,
                                  double interval_width, double* out);
jlp_status jlp_conjugate_bf01(double z, uint64_t n, double tau, double* out);
jlp_status jlp_posterior_from_bf(double bf01, double c, double* posterior_out,
                                 double* odds_out);

/* mode: 0 = odds-cancellation (constant = q), 1 = literal (constant = k). */
jlp_status jlp_calibrated_posterior_odds(double z, uint64_t n,
                                         double sigma0_over_sigma, int mode,
                                         double constant, double* odds_out);

/* ---- paradox analysis ---------------------------------------------- */

/* setup: 0 = lindley-uniform, 1 = normal-conjugate. */
jlp_status jlp_min_n_strong_contrast(double alpha, int setup, double c,
                                     double tau, double sigma, uint64_t* out);

jlp_status jlp_conflict_zone(uint64_t n, double alpha, double tau, double c,
                             double threshold, int* empty_out, double* z_lo_out,
                             double* z_hi_out);

/* truth: 0 = null-true, 1 = mixture. */
jlp_status jlp_simulate_conflict_rate(uint64_t n, double alpha, double tau,
                                      double c, int truth, uint64_t reps,
                                      uint64_t seed, unsigned workers,
                                      double* rate_out, double* std_error_out);

/* ---- interval-null quantities --------------------------------------- */

jlp_status jlp_tost_equivalence(double theta0, double sigma, uint64_t n,
                                double z, double delta, double alpha,
                                double* lower_t_out, double* upper_t_out,
                                int* concluded_out);

/* Uniform priors inside and on the truncated band outside; pass
 * outer_bound <= 0 for the default 10 * max(delta, sigma). */
jlp_status jlp_interval_log_bf01(double theta0, double sigma, uint64_t n,
                                 double z, double delta, double outer_bound,
                                 double* log_bf01_out);

jlp_status jlp_laplace_log_bf01(double theta0, double sigma, uint64_t n,
                                double z, double delta, double* log_bf01_out);

/* ---- report runs ----------------------------------------------------
 *
 * jlp_run* run = jlp_run_new("table1");
 * jlp_run_set(run, "format", "csv");
 * if (jlp_run_execute(run) == JLP_OK) puts(jlp_run_output(run));
 * jlp_run_free(run);
 *
 * Keys accepted by jlp_run_set mirror the CLI flags: alpha, n, z, sigma,
 * theta0, c, tau, interval-width, delta, outer-bound, threshold, truth,
 * seed, reps, workers, panel, grid, inside-prior, outside-prior, quote-z,
 * format, command.
 */

typedef struct jlp_run jlp_run;

jlp_run* jlp_run_new(const char* command);
void jlp_run_free(jlp_run* run);

jlp_status jlp_run_set(jlp_run* run, const char* key, const char* value);
jlp_status jlp_run_execute(jlp_run* run);

/* Rendered output of the last successful execute (CSV or JSON per the
 * configured format). Owned by the run; valid until execute/free. */
const char* jlp_run_output(const jlp_run* run);

jlp_status jlp_run_status(const jlp_run* run);
const char* jlp_run_error_message(const jlp_run* run);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* JLP_H */
