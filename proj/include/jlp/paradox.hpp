#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jlp/errors.hpp"

namespace jlp::paradox {

enum class Setup {
  lindley_uniform,   // width-free spike-and-slab posterior
  normal_conjugate,  // conjugate Bayes factor with prior scale tau
};

/// Query for the smallest sample size at which just-significant data at
/// level alpha yield posterior probability of H0 of at least 1 - alpha.
struct StrongContrastQuery {
  double alpha = 0.05;
  Setup setup = Setup::normal_conjugate;
  double c = 0.5;
  double tau = 1.0;    // conjugate setup only
  double sigma = 1.0;  // Lindley setup only

  void validate() const;
};

/// Search cap: queries with no solution at or below this n fail loudly.
inline constexpr std::uint64_t kSampleSizeCap = 10'000'000'000'000ULL;  // 1e13

std::uint64_t min_n_strong_contrast(const StrongContrastQuery& query);

/// Closed-form real-valued solution for the Lindley setup,
/// n* = 2 pi sigma^2 ((1-c)/c)^2 ((1-alpha)/alpha)^2 e^{z^2}.
/// Exposed for cross-checking the root-finding path.
double lindley_min_n_closed_form(double alpha, double c, double sigma);

struct CurvePoint {
  double abscissa;
  double posterior_h0;
  double p_value;
};

struct CurveSeries {
  std::string axis_label;
  std::vector<CurvePoint> points;
};

/// Posterior of H0 versus sample size at fixed z (likelihood-concentration
/// phenomenon): conjugate Bayes factor with prior scale tau, spike mass c.
/// The p-value column is constant along the series.
CurveSeries lindley_curve(double z, double tau, double c,
                          std::span<const std::uint64_t> n_grid);

/// Posterior of H0 versus prior scale tau at fixed data (z, n): the
/// prior-diffuseness phenomenon. The data never change along the series.
CurveSeries bartlett_curve(double z, std::uint64_t n, double c,
                           std::span<const double> tau_grid);

/// |z| band where the two-sided test rejects at level alpha while the
/// conjugate posterior of H0 is at least posterior_threshold.
struct ConflictZone {
  bool empty = true;
  double z_lo = 0.0;  // meaningful only when nonempty
  double z_hi = 0.0;  // +infinity when the threshold is vacuous

  /// Probability that a null-true draw lands in the zone:
  /// 2 (Phi(z_hi) - Phi(z_lo)); zero for an empty zone.
  double probability_null_true() const;
};

ConflictZone conflict_zone(std::uint64_t n, double alpha, double tau, double c,
                           double posterior_threshold);

enum class TruthModel {
  null_true,  // z ~ N(0,1)
  mixture,    // with prob c null-true, else slab effect then standardized
};

struct SimulationResult {
  double rate = 0.0;
  double std_error = 0.0;
  std::uint64_t conflicts = 0;
  std::uint64_t reps = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// Monte Carlo frequency of simultaneous frequentist rejection (p < alpha)
/// and Bayesian support (posterior of H0 above 1/2). Replicates use
/// deterministic substreams keyed on (seed, replicate index), so the result
/// is identical for any worker count.
SimulationResult simulate_conflict_rate(std::uint64_t n, double alpha,
                                        double tau, double c, TruthModel truth,
                                        std::uint64_t reps, std::uint64_t seed,
                                        unsigned workers = 1);

}  // namespace jlp::paradox
