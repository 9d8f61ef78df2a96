#pragma once

#include <cstdint>
#include <optional>
#include <variant>

#include "jlp/errors.hpp"

namespace jlp::point_null {

/// Sampling frame: null value theta0, known sampling SD sigma, sample size n,
/// and the observed standardized statistic z = (xbar - theta0) * sqrt(n) / sigma.
struct Scenario {
  double theta0 = 0.0;
  double sigma = 1.0;
  std::uint64_t n = 1;
  double z = 0.0;

  double sample_mean() const;
  void validate() const;

  static Scenario from_z(double theta0, double sigma, std::uint64_t n,
                         double z);
  static Scenario from_mean(double theta0, double sigma, std::uint64_t n,
                            double sample_mean);
};

/// Uniform slab of total width `width` centered at theta0.
struct UniformSlab {
  double width = 1.0;
};

/// Conjugate normal slab with prior SD sigma0 = tau * sigma.
struct ConjugateSlab {
  double tau = 1.0;
};

/// Spike-and-slab prior: point mass `mass_on_null` at theta0 plus a slab.
struct PriorSpec {
  double mass_on_null = 0.5;
  std::variant<UniformSlab, ConjugateSlab> slab = ConjugateSlab{1.0};

  void validate() const;
};

/// Bayes factor for H0 together with the posterior quantities it implies.
struct BayesReport {
  double bf01 = 1.0;
  double posterior_odds = 1.0;
  double posterior_h0 = 0.5;
  std::optional<Scenario> scenario;
  std::optional<PriorSpec> prior;
};

enum class CalibrationMode {
  literal,            // rho0(sigma0) = 1 - k * sigma0/sigma, valid below 1/k
  odds_cancellation,  // prior odds for H0 proportional to 1/sigma0
};

struct CalibrationSpec {
  CalibrationMode mode = CalibrationMode::odds_cancellation;
  double constant = 1.0;  // k in literal mode, q in cancellation mode

  void validate() const;
};

/// Posterior odds under a prior whose H0 mass is tied to the slab scale,
/// labeled with the mode that produced them.
struct CalibratedOdds {
  double odds = 1.0;
  CalibrationMode mode = CalibrationMode::odds_cancellation;
  double rho0 = 0.0;        // prior mass on H0 (literal mode only, else NaN)
  double limit_odds = 0.0;  // q * sqrt(n) * exp(-z^2/2), the diffuse limit
};

/// Upper alpha/2 standard normal quantile at full double precision.
double z_from_alpha(double alpha);

/// Mean that is exactly two-sided-significant at level alpha:
/// theta0 + z_from_alpha(alpha) * sigma / sqrt(n).
double just_significant_mean(double theta0, double sigma, std::uint64_t n,
                             double alpha);

/// Posterior probability of H0 for just-significant data under the
/// width-free spike-and-slab form:
///   c e^{-z^2/2} / (c e^{-z^2/2} + (1-c) sigma sqrt(2 pi / n)).
double lindley_posterior(double c, double z, double sigma, std::uint64_t n);

/// Same with the uniform slab width tracked explicitly: the slab term picks
/// up a factor 1/interval_width. Reduces to lindley_posterior at width 1.
double bartlett_posterior(double c, double z, double sigma, std::uint64_t n,
                          double interval_width);

/// Normal-conjugate Bayes factor for the point null:
///   B01 = sqrt(1 + n tau^2) * exp(-(z^2/2) * n tau^2 / (1 + n tau^2)).
double conjugate_bf01(double z, std::uint64_t n, double tau);

/// log B01 of the conjugate form; n may be fractional (used when inverting
/// for the sample size).
double conjugate_log_bf01(double z, double n, double tau);

/// log posterior odds of the explicit-width spike-and-slab form at real n.
double spike_slab_log_posterior_odds(double c, double z, double sigma,
                                     double n, double interval_width);

/// Combine a Bayes factor with prior mass c into posterior odds/probability.
BayesReport posterior_from_bf(double bf01, double c);

/// Posterior probability of H0 for a Scenario under a PriorSpec, choosing
/// the uniform-width or conjugate kernel to match the slab.
double point_posterior(const Scenario& scenario, const PriorSpec& prior);

/// Posterior odds when the prior mass on H0 is calibrated against the slab
/// scale sigma0/sigma (two documented readings of the scaling identity).
CalibratedOdds calibrated_posterior_odds(double z, std::uint64_t n,
                                         double sigma0_over_sigma,
                                         const CalibrationSpec& spec);

/// Guard for scenarios given both a direct z and a significance level:
/// the two must agree to 1e-9 when z is meant to be the just-significant
/// statistic, otherwise the input is rejected.
void require_z_alpha_consistent(double z, double alpha, bool quote_z = false);

/// lambda_{alpha/2} rounded to two decimals, as quoted in figure captions.
double quoted_z_from_alpha(double alpha);

}  // namespace jlp::point_null
