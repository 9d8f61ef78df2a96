#pragma once

#include <functional>

#include "jlp/errors.hpp"
#include "jlp/numerics.hpp"
#include "jlp/point_null.hpp"

namespace jlp::interval_null {

enum class PriorShape {
  uniform,
  truncated_normal,  // centered at theta0, truncated to its region
};

struct RegionPrior {
  PriorShape shape = PriorShape::uniform;
  double scale = 1.0;  // truncated-normal SD; ignored for uniform
};

/// Equivalence-region null |theta - theta0| <= delta with continuous priors
/// on both sides and an outer truncation of the alternative region.
struct IntervalNullSpec {
  double delta = 0.1;
  RegionPrior inside;
  RegionPrior outside;
  double outer_bound = 1.0;  // H1 integrated over delta < |theta-theta0| <= outer_bound

  void validate() const;

  /// Uniform priors both sides, outer bound 10 * max(delta, sigma).
  static IntervalNullSpec defaults(double delta, double sigma);
};

/// Bayes factor for the interval null, carried in log space; bf01 is the
/// exponentiated value and may overflow to +inf while log_bf01 stays exact.
struct IntervalBayesResult {
  double log_bf01 = 0.0;
  double bf01 = 1.0;
  double log_numerator = 0.0;    // log marginal likelihood of H0
  double log_denominator = 0.0;  // log marginal likelihood of H1
  double h1_tail_bound = 0.0;    // likelihood mass beyond the outer truncation
};

IntervalBayesResult interval_bf01(const point_null::Scenario& scenario,
                                  const IntervalNullSpec& spec,
                                  const num::QuadratureSettings& settings = {});

/// One-sided Laplace (Mills-ratio) expansion of log B01 when the MLE lies
/// inside the interval, under the default uniform priors:
///   log B01 ~ u^2/2 + log(u) + log(sqrt(2 pi)) + log((outer-delta)/delta),
/// with u = sqrt(n) delta/sigma - |z|. The quadratic term expands to
/// n delta^2/(2 sigma^2) - |z| delta sqrt(n)/sigma + z^2/2, whose first piece
/// is the leading exponential growth rate. Each term is reported.
struct LaplaceExpansion {
  double log_bf01 = 0.0;
  double leading_term = 0.0;       // n delta^2 / (2 sigma^2)
  double boundary_exponent = 0.0;  // u^2 / 2
  double mills_log_factor = 0.0;   // log(u) + log(sqrt(2 pi))
  double log_prior_ratio = 0.0;    // log((outer-delta)/delta)
  double u = 0.0;
  double outer_bound = 0.0;        // default outer truncation used
};

LaplaceExpansion laplace_log_bf01(const point_null::Scenario& scenario,
                                  double delta);

/// Two one-sided z tests for |theta - theta0| <= delta at level alpha.
struct EquivalenceVerdict {
  double lower_t = 0.0;  // (xbar - (theta0 - delta)) sqrt(n) / sigma
  double upper_t = 0.0;  // ((theta0 + delta) - xbar) sqrt(n) / sigma
  bool concluded_equivalence = false;
  double alpha = 0.05;
};

EquivalenceVerdict tost_equivalence(const point_null::Scenario& scenario,
                                    double delta, double alpha);

enum class PointDecision { reject, retain };

enum class Label {
  jl_conflict,          // point-null reject with posterior above 1 - alpha
  bartlett_inflated,    // same, but only because of an inflated slab scale
  agreement_support_h0, // TOST concludes and the interval BF favors H0
  agreement_reject_h0,  // reject, interval BF against H0, TOST inconclusive
  indeterminate,
};

const char* to_string(Label label);
const char* to_string(PointDecision decision);

/// Joint frequentist/Bayesian verdict on both the point-null and the
/// interval-null formulations of the same scenario.
struct ParadoxClassification {
  PointDecision point_null_frequentist = PointDecision::retain;
  double p_value = 1.0;
  double point_null_bayes_posterior = 0.5;
  IntervalBayesResult interval;
  EquivalenceVerdict tost;
  bool interval_agreement = false;  // TOST concluded and log BF01 > 0
  Label label = Label::indeterminate;
};

/// Pure label assignment; strict inequalities gate the conflict labels and
/// an exact posterior boundary is deliberately indeterminate.
/// `unit_scale_conflict` reports whether the conflict would persist with the
/// slab at unit scale (width 1 or tau 1): if not, the slab scale is what
/// manufactured the conflict and the label is bartlett_inflated.
Label classify(bool point_reject, double point_posterior,
               bool unit_scale_conflict, double interval_log_bf01,
               bool tost_concluded, double alpha);

ParadoxClassification agreement_report(
    const point_null::Scenario& scenario, const point_null::PriorSpec& prior,
    const IntervalNullSpec& spec, double alpha,
    const num::QuadratureSettings& settings = {});

/// Normalized log prior densities over their regions; exposed so the
/// normalization can be verified by quadrature.
std::function<double(double)> inside_log_density(const IntervalNullSpec& spec,
                                                 double theta0);
std::function<double(double)> outside_log_density(const IntervalNullSpec& spec,
                                                  double theta0);

}  // namespace jlp::interval_null
