#include "jlp.h"

#include <exception>
#include <string>

#include "jlp/errors.hpp"
#include "jlp/interval_null.hpp"
#include "jlp/numerics.hpp"
#include "jlp/paradox.hpp"
#include "jlp/point_null.hpp"
#include "jlp/report.hpp"

namespace {

thread_local std::string g_last_error;

jlp_status record_error(jlp_status status, const char* what) {
  g_last_error = what ? what : "";
  return status;
}

// Translate the C++ error taxonomy into C status codes.
template <typename Fn>
jlp_status guarded(Fn&& fn) {
  try {
    fn();
    return JLP_OK;
  } catch (const jlp::invalid_input& err) {
    return record_error(JLP_ERROR_USAGE, err.what());
  } catch (const jlp::no_convergence& err) {
    return record_error(JLP_ERROR_NO_CONVERGENCE, err.what());
  } catch (const jlp::domain_error& err) {
    return record_error(JLP_ERROR_DOMAIN, err.what());
  } catch (const std::exception& err) {
    return record_error(JLP_ERROR_INTERNAL, err.what());
  } catch (...) {
    return record_error(JLP_ERROR_INTERNAL, "unknown error");
  }
}

jlp_status require(bool ok, const char* what) {
  return ok ? JLP_OK : record_error(JLP_ERROR_USAGE, what);
}

}  // namespace

extern "C" {

const char* jlp_version(void) { return "0.1.0"; }

const char* jlp_last_error_message(void) { return g_last_error.c_str(); }

jlp_status jlp_std_normal_cdf(double x, double* out) {
  if (jlp_status bad = require(out != nullptr, "null out pointer")) return bad;
  return guarded([&] { *out = jlp::num::std_normal_cdf(x); });
}

jlp_status jlp_std_normal_quantile(double p, double* out) {
  if (jlp_status bad = require(out != nullptr, "null out pointer")) return bad;
  return guarded([&] { *out = jlp::num::std_normal_quantile(p); });
}

jlp_status jlp_just_significant_mean(double theta0, double sigma, uint64_t n,
                                     double alpha, double* out) {
  if (jlp_status bad = require(out != nullptr, "null out pointer")) return bad;
  return guarded([&] {
    *out = jlp::point_null::just_significant_mean(theta0, sigma, n, alpha);
  });
}

jlp_status jlp_lindley_posterior(double c, double z, double sigma, uint64_t n,
                                 double* out) {
  if (jlp_status bad = require(out != nullptr, "null out pointer")) return bad;
  return guarded([&] {
    *out = jlp::point_null::lindley_posterior(c, z, sigma, n);
  });
}

jlp_status jlp_bartlett_posterior(double c, double z, double sigma, uint64_t n,
                                  double interval_width, double* out) {
  if (jlp_status bad = require(out != nullptr, "null out pointer")) return bad;
  return guarded([&] {
    *out = jlp::point_null::bartlett_posterior(c, z, sigma, n, interval_width);
  });
}

jlp_status jlp_conjugate_bf01(double z, uint64_t n, double tau, double* out) {
  if (jlp_status bad = require(out != nullptr, "null out pointer")) return bad;
  return guarded([&] { *out = jlp::point_null::conjugate_bf01(z, n, tau); });
}

jlp_status jlp_posterior_from_bf(double bf01, double c, double* posterior_out,
                                 double* odds_out) {
  if (jlp_status bad = require(posterior_out != nullptr && odds_out != nullptr,
                               "null out pointer")) {
    return bad;
  }
  return guarded([&] {
    const auto report = jlp::point_null::posterior_from_bf(bf01, c);
    *posterior_out = report.posterior_h0;
    *odds_out = report.posterior_odds;
  });
}

jlp_status jlp_calibrated_posterior_odds(double z, uint64_t n,
                                         double sigma0_over_sigma, int mode,
                                         double constant, double* odds_out) {
  if (jlp_status bad = require(odds_out != nullptr, "null out pointer")) {
    return bad;
  }
  if (jlp_status bad = require(mode == 0 || mode == 1,
                               "mode must be 0 (cancellation) or 1 (literal)")) {
    return bad;
  }
  return guarded([&] {
    jlp::point_null::CalibrationSpec spec;
    spec.mode = (mode == 1) ? jlp::point_null::CalibrationMode::literal
                            : jlp::point_null::CalibrationMode::odds_cancellation;
    spec.constant = constant;
    *odds_out = jlp::point_null::calibrated_posterior_odds(
                    z, n, sigma0_over_sigma, spec)
                    .odds;
  });
}

jlp_status jlp_min_n_strong_contrast(double alpha, int setup, double c,
                                     double tau, double sigma, uint64_t* out) {
  if (jlp_status bad = require(out != nullptr, "null out pointer")) return bad;
  if (jlp_status bad = require(setup == 0 || setup == 1,
                               "setup must be 0 (lindley) or 1 (conjugate)")) {
    return bad;
  }
  return guarded([&] {
    jlp::paradox::StrongContrastQuery query;
    query.alpha = alpha;
    query.setup = (setup == 1) ? jlp::paradox::Setup::normal_conjugate
                               : jlp::paradox::Setup::lindley_uniform;
    query.c = c;
    query.tau = tau;
    query.sigma = sigma;
    *out = jlp::paradox::min_n_strong_contrast(query);
  });
}

jlp_status jlp_conflict_zone(uint64_t n, double alpha, double tau, double c,
                             double threshold, int* empty_out, double* z_lo_out,
                             double* z_hi_out) {
  if (jlp_status bad = require(
          empty_out != nullptr && z_lo_out != nullptr && z_hi_out != nullptr,
          "null out pointer")) {
    return bad;
  }
  return guarded([&] {
    const auto zone = jlp::paradox::conflict_zone(n, alpha, tau, c, threshold);
    *empty_out = zone.empty ? 1 : 0;
    *z_lo_out = zone.empty ? 0.0 : zone.z_lo;
    *z_hi_out = zone.empty ? 0.0 : zone.z_hi;
  });
}

jlp_status jlp_simulate_conflict_rate(uint64_t n, double alpha, double tau,
                                      double c, int truth, uint64_t reps,
                                      uint64_t seed, unsigned workers,
                                      double* rate_out, double* std_error_out) {
  if (jlp_status bad = require(rate_out != nullptr && std_error_out != nullptr,
                               "null out pointer")) {
    return bad;
  }
  if (jlp_status bad = require(truth == 0 || truth == 1,
                               "truth must be 0 (null-true) or 1 (mixture)")) {
    return bad;
  }
  return guarded([&] {
    const auto result = jlp::paradox::simulate_conflict_rate(
        n, alpha, tau, c,
        truth == 0 ? jlp::paradox::TruthModel::null_true
                   : jlp::paradox::TruthModel::mixture,
        reps, seed, workers);
    *rate_out = result.rate;
    *std_error_out = result.std_error;
  });
}

jlp_status jlp_tost_equivalence(double theta0, double sigma, uint64_t n,
                                double z, double delta, double alpha,
                                double* lower_t_out, double* upper_t_out,
                                int* concluded_out) {
  if (jlp_status bad = require(lower_t_out != nullptr &&
                                   upper_t_out != nullptr &&
                                   concluded_out != nullptr,
                               "null out pointer")) {
    return bad;
  }
  return guarded([&] {
    const auto scenario =
        jlp::point_null::Scenario::from_z(theta0, sigma, n, z);
    const auto verdict =
        jlp::interval_null::tost_equivalence(scenario, delta, alpha);
    *lower_t_out = verdict.lower_t;
    *upper_t_out = verdict.upper_t;
    *concluded_out = verdict.concluded_equivalence ? 1 : 0;
  });
}

jlp_status jlp_interval_log_bf01(double theta0, double sigma, uint64_t n,
                                 double z, double delta, double outer_bound,
                                 double* log_bf01_out) {
  if (jlp_status bad = require(log_bf01_out != nullptr, "null out pointer")) {
    return bad;
  }
  return guarded([&] {
    const auto scenario =
        jlp::point_null::Scenario::from_z(theta0, sigma, n, z);
    auto spec = jlp::interval_null::IntervalNullSpec::defaults(delta, sigma);
    if (outer_bound > 0.0) spec.outer_bound = outer_bound;
    *log_bf01_out =
        jlp::interval_null::interval_bf01(scenario, spec).log_bf01;
  });
}

jlp_status jlp_laplace_log_bf01(double theta0, double sigma, uint64_t n,
                                double z, double delta, double* log_bf01_out) {
  if (jlp_status bad = require(log_bf01_out != nullptr, "null out pointer")) {
    return bad;
  }
  return guarded([&] {
    const auto scenario =
        jlp::point_null::Scenario::from_z(theta0, sigma, n, z);
    *log_bf01_out =
        jlp::interval_null::laplace_log_bf01(scenario, delta).log_bf01;
  });
}

struct jlp_run {
  jlp::report::RunConfig config;
  std::string output;
  std::string error;
  jlp_status status = JLP_OK;
  bool executed = false;
};

jlp_run* jlp_run_new(const char* command) {
  if (command == nullptr) return nullptr;
  try {
    auto* run = new jlp_run;
    run->config.command = jlp::report::parse_command(command);
    return run;
  } catch (...) {
    return nullptr;
  }
}

void jlp_run_free(jlp_run* run) { delete run; }

jlp_status jlp_run_set(jlp_run* run, const char* key, const char* value) {
  if (run == nullptr) return JLP_ERROR_USAGE;
  if (key == nullptr || value == nullptr) {
    run->error = "null key or value";
    return run->status = JLP_ERROR_USAGE;
  }
  try {
    jlp::report::apply_key_value(run->config, key, value);
    return JLP_OK;
  } catch (const jlp::invalid_input& err) {
    run->error = err.what();
    return run->status = JLP_ERROR_USAGE;
  } catch (const std::exception& err) {
    run->error = err.what();
    return run->status = JLP_ERROR_INTERNAL;
  }
}

jlp_status jlp_run_execute(jlp_run* run) {
  if (run == nullptr) return JLP_ERROR_USAGE;
  run->executed = false;
  run->output.clear();
  run->error.clear();
  try {
    const auto result = jlp::report::run(run->config);
    run->output = jlp::report::render(run->config, result);
    run->executed = true;
    return run->status = JLP_OK;
  } catch (const jlp::invalid_input& err) {
    run->error = err.what();
    return run->status = JLP_ERROR_USAGE;
  } catch (const jlp::no_convergence& err) {
    run->error = err.what();
    return run->status = JLP_ERROR_NO_CONVERGENCE;
  } catch (const jlp::domain_error& err) {
    run->error = err.what();
    return run->status = JLP_ERROR_DOMAIN;
  } catch (const std::exception& err) {
    run->error = err.what();
    return run->status = JLP_ERROR_INTERNAL;
  }
}

const char* jlp_run_output(const jlp_run* run) {
  if (run == nullptr || !run->executed) return "";
  return run->output.c_str();
}

jlp_status jlp_run_status(const jlp_run* run) {
  return run == nullptr ? JLP_ERROR_USAGE : run->status;
}

const char* jlp_run_error_message(const jlp_run* run) {
  return run == nullptr ? "null run handle" : run->error.c_str();
}

}  // extern "C"
