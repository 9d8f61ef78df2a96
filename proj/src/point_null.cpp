#include "jlp/point_null.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "jlp/numerics.hpp"

namespace jlp::point_null {

namespace {

constexpr double kLogTwoPi = 1.83787706640934548356;

double logistic_from_log_odds(double log_odds) {
  // Stable in both directions; saturates to 0/1 only when the odds truly do.
  if (log_odds >= 0.0) {
    return 1.0 / (1.0 + std::exp(-log_odds));
  }
  const double e = std::exp(log_odds);
  return e / (1.0 + e);
}

void check_mass(double c) {
  if (!(c > 0.0) || !(c < 1.0)) {
    throw invalid_input("prior mass on the null must lie strictly in (0,1)");
  }
}

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw invalid_input("sigma must be a positive finite real");
  }
}

void check_n(std::uint64_t n) {
  if (n < 1) {
    throw invalid_input("sample size n must be >= 1");
  }
}

void check_z(double z) {
  if (!std::isfinite(z)) {
    throw invalid_input("z must be finite");
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw invalid_input("alpha must lie strictly in (0,1)");
  }
}

}  // namespace

double Scenario::sample_mean() const {
  return theta0 + z * sigma / std::sqrt(static_cast<double>(n));
}

void Scenario::validate() const {
  if (!std::isfinite(theta0)) {
    throw invalid_input("Scenario: theta0 must be finite");
  }
  check_sigma(sigma);
  check_n(n);
  check_z(z);
}

Scenario Scenario::from_z(double theta0, double sigma, std::uint64_t n,
                          double z) {
  Scenario s{theta0, sigma, n, z};
  s.validate();
  return s;
}

Scenario Scenario::from_mean(double theta0, double sigma, std::uint64_t n,
                             double sample_mean) {
  check_sigma(sigma);
  check_n(n);
  if (!std::isfinite(sample_mean)) {
    throw invalid_input("Scenario: sample mean must be finite");
  }
  const double z =
      (sample_mean - theta0) * std::sqrt(static_cast<double>(n)) / sigma;
  return from_z(theta0, sigma, n, z);
}

void PriorSpec::validate() const {
  check_mass(mass_on_null);
  if (const auto* uniform = std::get_if<UniformSlab>(&slab)) {
    if (!(uniform->width > 0.0) || !std::isfinite(uniform->width)) {
      throw invalid_input("PriorSpec: uniform slab width must be positive");
    }
  } else {
    const auto& conjugate = std::get<ConjugateSlab>(slab);
    if (!(conjugate.tau > 0.0) || !std::isfinite(conjugate.tau)) {
      throw invalid_input("PriorSpec: conjugate slab tau must be positive");
    }
  }
}

void CalibrationSpec::validate() const {
  if (!(constant > 0.0) || !std::isfinite(constant)) {
    throw invalid_input("CalibrationSpec: constant must be positive");
  }
}

double z_from_alpha(double alpha) {
  check_alpha(alpha);
  return num::std_normal_quantile(1.0 - alpha / 2.0);
}

double quoted_z_from_alpha(double alpha) {
  return std::round(z_from_alpha(alpha) * 100.0) / 100.0;
}

void require_z_alpha_consistent(double z, double alpha, bool quote_z) {
  const double lambda = quote_z ? quoted_z_from_alpha(alpha)
                                : z_from_alpha(alpha);
  if (std::fabs(z - lambda) > 1e-9) {
    std::ostringstream msg;
    msg << "z = " << z << " disagrees with the level-" << alpha
        << " just-significant statistic " << lambda
        << " (must match to 1e-9 when both are supplied)";
    throw invalid_input(msg.str());
  }
}

double just_significant_mean(double theta0, double sigma, std::uint64_t n,
                             double alpha) {
  if (!std::isfinite(theta0)) {
    throw invalid_input("theta0 must be finite");
  }
  check_sigma(sigma);
  check_n(n);
  return theta0 +
         z_from_alpha(alpha) * sigma / std::sqrt(static_cast<double>(n));
}

double spike_slab_log_posterior_odds(double c, double z, double sigma,
                                     double n, double interval_width) {
  // log of [c e^{-z^2/2}] / [(1-c)/I * sigma * sqrt(2 pi / n)], kept in log
  // space so z up to ~40 and n up to ~1e12 stay representable.
  return std::log(c) - std::log1p(-c) + std::log(interval_width) -
         0.5 * z * z - std::log(sigma) - 0.5 * (kLogTwoPi - std::log(n));
}

double bartlett_posterior(double c, double z, double sigma, std::uint64_t n,
                          double interval_width) {
  check_mass(c);
  check_z(z);
  check_sigma(sigma);
  check_n(n);
  if (!(interval_width > 0.0) || !std::isfinite(interval_width)) {
    throw invalid_input("interval_width must be a positive finite real");
  }
  return logistic_from_log_odds(spike_slab_log_posterior_odds(
      c, z, sigma, static_cast<double>(n), interval_width));
}

double lindley_posterior(double c, double z, double sigma, std::uint64_t n) {
  // The width-free form is the explicit-width form at I = 1.
  return bartlett_posterior(c, z, sigma, n, 1.0);
}

double conjugate_log_bf01(double z, double n, double tau) {
  const double t2 = n * tau * tau;
  if (t2 == 0.0) return 0.0;
  return 0.5 * std::log1p(t2) - 0.5 * z * z * (t2 / (1.0 + t2));
}

double conjugate_bf01(double z, std::uint64_t n, double tau) {
  check_z(z);
  check_n(n);
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw invalid_input("tau must be a nonnegative finite real");
  }
  return std::exp(conjugate_log_bf01(z, static_cast<double>(n), tau));
}

BayesReport posterior_from_bf(double bf01, double c) {
  check_mass(c);
  if (!(bf01 > 0.0) || !std::isfinite(bf01)) {
    throw invalid_input("bf01 must be a positive finite real");
  }
  BayesReport report;
  report.bf01 = bf01;
  report.posterior_odds = c / (1.0 - c) * bf01;
  report.posterior_h0 = report.posterior_odds / (1.0 + report.posterior_odds);
  return report;
}

double point_posterior(const Scenario& scenario, const PriorSpec& prior) {
  scenario.validate();
  prior.validate();
  const double c = prior.mass_on_null;
  if (const auto* uniform = std::get_if<UniformSlab>(&prior.slab)) {
    return bartlett_posterior(c, scenario.z, scenario.sigma, scenario.n,
                              uniform->width);
  }
  const double tau = std::get<ConjugateSlab>(prior.slab).tau;
  const double log_odds =
      std::log(c) - std::log1p(-c) +
      conjugate_log_bf01(scenario.z, static_cast<double>(scenario.n), tau);
  return logistic_from_log_odds(log_odds);
}

CalibratedOdds calibrated_posterior_odds(double z, std::uint64_t n,
                                         double sigma0_over_sigma,
                                         const CalibrationSpec& spec) {
  check_z(z);
  check_n(n);
  spec.validate();
  if (!(sigma0_over_sigma > 0.0) || !std::isfinite(sigma0_over_sigma)) {
    throw invalid_input("sigma0/sigma must be a positive finite real");
  }
  const double tau = sigma0_over_sigma;
  const double log_bf =
      conjugate_log_bf01(z, static_cast<double>(n), tau);

  CalibratedOdds result;
  result.mode = spec.mode;
  result.limit_odds = spec.constant *
                      std::sqrt(static_cast<double>(n)) *
                      std::exp(-0.5 * z * z);
  if (spec.mode == CalibrationMode::literal) {
    const double k = spec.constant;
    const double rho0 = 1.0 - k * tau;
    if (!(rho0 > 0.0) || !(rho0 < 1.0)) {
      std::ostringstream msg;
      msg << "literal calibration requires sigma0/sigma < 1/k = " << 1.0 / k
          << " (got " << tau << ")";
      throw jlp::domain_error(msg.str());
    }
    result.rho0 = rho0;
    result.odds = std::exp(std::log(rho0) - std::log1p(-rho0) + log_bf);
  } else {
    result.rho0 = std::numeric_limits<double>::quiet_NaN();
    result.odds =
        std::exp(std::log(spec.constant) - std::log(tau) + log_bf);
  }
  return result;
}

}  // namespace jlp::point_null
