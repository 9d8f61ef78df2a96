#include "jlp/interval_null.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace jlp::interval_null {

namespace {

constexpr double kLogSqrtTwoPi = 0.91893853320467274178;

void check_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw invalid_input("delta must be a positive finite real");
  }
}

double log_normal_density(double x, double mean, double sd) {
  const double standardized = (x - mean) / sd;
  return -0.5 * standardized * standardized - std::log(sd) - kLogSqrtTwoPi;
}

// Mass of N(0,1) in [lo_sd, hi_sd], computed from the upper tail so wide
// truncations keep relative accuracy.
double normal_mass(double lo_sd, double hi_sd) {
  return num::std_normal_ccdf(lo_sd) - num::std_normal_ccdf(hi_sd);
}

struct RegionIntegrand {
  // log integrand ell(theta) = log L(theta) + log pi(theta) on one region,
  // with the quadratic geometry exposed for presplitting.
  std::function<double(double)> log_eval;
  double peak;        // unconstrained argmax of ell
  double peak_width;  // curvature scale at the peak
  std::function<double(double)> slope;  // d ell / d theta
};

RegionIntegrand make_integrand(const point_null::Scenario& scenario,
                               const RegionPrior& prior, double log_norm,
                               double likelihood_sd) {
  const double xbar = scenario.sample_mean();
  const double theta0 = scenario.theta0;
  const double sd = likelihood_sd;
  if (prior.shape == PriorShape::uniform) {
    return RegionIntegrand{
        [=](double theta) {
          return log_normal_density(xbar, theta, sd) + log_norm;
        },
        xbar, sd,
        [=](double theta) { return -(theta - xbar) / (sd * sd); }};
  }
  const double s = prior.scale;
  const double precision = 1.0 / (sd * sd) + 1.0 / (s * s);
  const double peak = (xbar / (sd * sd) + theta0 / (s * s)) / precision;
  return RegionIntegrand{
      [=](double theta) {
        return log_normal_density(xbar, theta, sd) +
               log_normal_density(theta, theta0, s) + log_norm;
      },
      peak, 1.0 / std::sqrt(precision),
      [=](double theta) {
        return -(theta - xbar) / (sd * sd) - (theta - theta0) / (s * s);
      }};
}

struct Piece {
  double lo;
  double hi;
};

// Breakpoints that resolve the likelihood spike and any steep boundary
// layer, so the adaptive quadrature starts from panels that already see
// the mass.
std::vector<double> make_breakpoints(const RegionIntegrand& integrand,
                                     const Piece& piece) {
  std::vector<double> points{piece.lo, piece.hi};
  const double span = piece.hi - piece.lo;
  const auto push_inside = [&](double x) {
    if (x > piece.lo && x < piece.hi) points.push_back(x);
  };

  if (integrand.peak > piece.lo && integrand.peak < piece.hi) {
    push_inside(integrand.peak);
    for (double k : {1.0, 2.0, 4.0, 8.0}) {
      push_inside(integrand.peak - k * integrand.peak_width);
      push_inside(integrand.peak + k * integrand.peak_width);
    }
  }
  for (double edge : {piece.lo, piece.hi}) {
    const double grad = integrand.slope(edge);
    const double direction = (edge == piece.lo) ? 1.0 : -1.0;
    // Only refine when the integrand decays across the piece much faster
    // than the piece width.
    if (grad * direction < 0.0 && std::fabs(grad) * span > 50.0) {
      const double decay = 1.0 / std::fabs(grad);
      for (double k : {1.0, 4.0, 16.0, 64.0, 256.0}) {
        push_inside(edge + direction * k * decay);
      }
    }
  }

  std::sort(points.begin(), points.end());
  std::vector<double> unique_points;
  unique_points.reserve(points.size());
  const double min_gap =
      1e-13 * (std::fabs(piece.lo) + std::fabs(piece.hi) + 1.0);
  for (double x : points) {
    if (unique_points.empty() || x - unique_points.back() > min_gap) {
      unique_points.push_back(x);
    }
  }
  if (unique_points.back() != piece.hi) unique_points.back() = piece.hi;
  return unique_points;
}

// log of the integral of exp(ell) over the union of pieces, scaled by the
// region's own maximum so the quadrature never underflows.
double log_region_integral(const RegionIntegrand& integrand,
                           const std::vector<Piece>& pieces,
                           const num::QuadratureSettings& settings) {
  double log_max = -std::numeric_limits<double>::infinity();
  for (const Piece& piece : pieces) {
    const double at =
        std::clamp(integrand.peak, piece.lo, piece.hi);
    log_max = std::max(log_max, integrand.log_eval(at));
    log_max = std::max(log_max, integrand.log_eval(piece.lo));
    log_max = std::max(log_max, integrand.log_eval(piece.hi));
  }

  double total = 0.0;
  for (const Piece& piece : pieces) {
    const auto scaled = [&](double theta) {
      const double value = integrand.log_eval(theta) - log_max;
      return (value < -745.0) ? 0.0 : std::exp(value);
    };
    total += num::integrate(scaled, make_breakpoints(integrand, piece),
                            settings);
  }
  if (!(total > 0.0)) {
    throw no_convergence("interval_bf01: region integral vanished", total);
  }
  return log_max + std::log(total);
}

}  // namespace

void IntervalNullSpec::validate() const {
  check_delta(delta);
  if (!(outer_bound > delta) || !std::isfinite(outer_bound)) {
    throw invalid_input("outer_bound must exceed delta");
  }
  for (const RegionPrior* prior : {&inside, &outside}) {
    if (prior->shape == PriorShape::truncated_normal &&
        (!(prior->scale > 0.0) || !std::isfinite(prior->scale))) {
      throw invalid_input("truncated-normal prior scale must be positive");
    }
  }
}

IntervalNullSpec IntervalNullSpec::defaults(double delta, double sigma) {
  check_delta(delta);
  if (!(sigma > 0.0)) {
    throw invalid_input("sigma must be positive");
  }
  IntervalNullSpec spec;
  spec.delta = delta;
  spec.inside = RegionPrior{PriorShape::uniform, 1.0};
  spec.outside = RegionPrior{PriorShape::uniform, 1.0};
  spec.outer_bound = 10.0 * std::max(delta, sigma);
  return spec;
}

std::function<double(double)> inside_log_density(const IntervalNullSpec& spec,
                                                 double theta0) {
  spec.validate();
  if (spec.inside.shape == PriorShape::uniform) {
    const double log_density = -std::log(2.0 * spec.delta);
    return [log_density](double) { return log_density; };
  }
  const double s = spec.inside.scale;
  const double mass = normal_mass(-spec.delta / s, spec.delta / s);
  const double log_norm = -std::log(mass);
  return [=](double theta) {
    return log_normal_density(theta, theta0, s) + log_norm;
  };
}

std::function<double(double)> outside_log_density(const IntervalNullSpec& spec,
                                                  double theta0) {
  spec.validate();
  if (spec.outside.shape == PriorShape::uniform) {
    const double log_density =
        -std::log(2.0 * (spec.outer_bound - spec.delta));
    return [log_density](double) { return log_density; };
  }
  const double s = spec.outside.scale;
  const double mass =
      2.0 * normal_mass(spec.delta / s, spec.outer_bound / s);
  const double log_norm = -std::log(mass);
  return [=](double theta) {
    return log_normal_density(theta, theta0, s) + log_norm;
  };
}

IntervalBayesResult interval_bf01(const point_null::Scenario& scenario,
                                  const IntervalNullSpec& spec,
                                  const num::QuadratureSettings& settings) {
  scenario.validate();
  spec.validate();
  settings.validate();

  const double theta0 = scenario.theta0;
  const double sd =
      scenario.sigma / std::sqrt(static_cast<double>(scenario.n));
  const double xbar = scenario.sample_mean();

  // Normalization constants folded into the log integrands.
  double inside_log_norm;
  if (spec.inside.shape == PriorShape::uniform) {
    inside_log_norm = -std::log(2.0 * spec.delta);
  } else {
    inside_log_norm = -std::log(
        normal_mass(-spec.delta / spec.inside.scale,
                    spec.delta / spec.inside.scale));
  }
  double outside_log_norm;
  if (spec.outside.shape == PriorShape::uniform) {
    outside_log_norm = -std::log(2.0 * (spec.outer_bound - spec.delta));
  } else {
    outside_log_norm = -std::log(
        2.0 * normal_mass(spec.delta / spec.outside.scale,
                          spec.outer_bound / spec.outside.scale));
  }

  const RegionIntegrand inside =
      make_integrand(scenario, spec.inside, inside_log_norm, sd);
  const RegionIntegrand outside =
      make_integrand(scenario, spec.outside, outside_log_norm, sd);

  const std::vector<Piece> inside_pieces{
      {theta0 - spec.delta, theta0 + spec.delta}};
  const std::vector<Piece> outside_pieces{
      {theta0 - spec.outer_bound, theta0 - spec.delta},
      {theta0 + spec.delta, theta0 + spec.outer_bound}};

  IntervalBayesResult result;
  result.log_numerator = log_region_integral(inside, inside_pieces, settings);
  result.log_denominator =
      log_region_integral(outside, outside_pieces, settings);
  result.log_bf01 = result.log_numerator - result.log_denominator;
  result.bf01 = std::exp(result.log_bf01);
  result.h1_tail_bound =
      num::std_normal_ccdf((theta0 + spec.outer_bound - xbar) / sd) +
      num::std_normal_ccdf((xbar - (theta0 - spec.outer_bound)) / sd);
  return result;
}

LaplaceExpansion laplace_log_bf01(const point_null::Scenario& scenario,
                                  double delta) {
  scenario.validate();
  check_delta(delta);
  const double sigma = scenario.sigma;
  const double sqrt_n = std::sqrt(static_cast<double>(scenario.n));
  const double effect = std::fabs(scenario.z) * sigma / sqrt_n;
  if (!(effect < delta)) {
    std::ostringstream msg;
    msg << "laplace_log_bf01: |xbar - theta0| = " << effect
        << " must lie inside the interval half-width " << delta
        << "; the boundary-layer expansion does not apply";
    throw jlp::domain_error(msg.str());
  }

  LaplaceExpansion expansion;
  expansion.outer_bound = 10.0 * std::max(delta, sigma);
  expansion.u = sqrt_n * delta / sigma - std::fabs(scenario.z);
  expansion.leading_term =
      static_cast<double>(scenario.n) * delta * delta / (2.0 * sigma * sigma);
  expansion.boundary_exponent = 0.5 * expansion.u * expansion.u;
  expansion.mills_log_factor = std::log(expansion.u) + kLogSqrtTwoPi;
  expansion.log_prior_ratio =
      std::log((expansion.outer_bound - delta) / delta);
  expansion.log_bf01 = expansion.boundary_exponent +
                       expansion.mills_log_factor + expansion.log_prior_ratio;
  return expansion;
}

EquivalenceVerdict tost_equivalence(const point_null::Scenario& scenario,
                                    double delta, double alpha) {
  scenario.validate();
  check_delta(delta);
  if (!(alpha > 0.0) || !(alpha < 0.5)) {
    throw invalid_input("tost_equivalence: alpha must lie in (0, 0.5)");
  }
  const double sqrt_n = std::sqrt(static_cast<double>(scenario.n));
  const double xbar = scenario.sample_mean();
  const double scale = sqrt_n / scenario.sigma;

  EquivalenceVerdict verdict;
  verdict.alpha = alpha;
  verdict.lower_t = (xbar - (scenario.theta0 - delta)) * scale;
  verdict.upper_t = ((scenario.theta0 + delta) - xbar) * scale;
  const double critical = num::std_normal_quantile(1.0 - alpha);
  verdict.concluded_equivalence =
      verdict.lower_t > critical && verdict.upper_t > critical;
  return verdict;
}

const char* to_string(Label label) {
  switch (label) {
    case Label::jl_conflict: return "jl-conflict";
    case Label::bartlett_inflated: return "bartlett-inflated";
    case Label::agreement_support_h0: return "agreement-support-h0";
    case Label::agreement_reject_h0: return "agreement-reject-h0";
    case Label::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

const char* to_string(PointDecision decision) {
  return decision == PointDecision::reject ? "reject" : "retain";
}

Label classify(bool point_reject, double point_posterior,
               bool unit_scale_conflict, double interval_log_bf01,
               bool tost_concluded, double alpha) {
  const double strong = 1.0 - alpha;
  if (point_reject && point_posterior > strong) {
    return unit_scale_conflict ? Label::jl_conflict : Label::bartlett_inflated;
  }
  if (point_reject && point_posterior == strong) {
    return Label::indeterminate;  // boundary needs strict inequality
  }
  if (tost_concluded && interval_log_bf01 > 0.0) {
    return Label::agreement_support_h0;
  }
  if (point_reject && interval_log_bf01 < 0.0 && !tost_concluded) {
    return Label::agreement_reject_h0;
  }
  return Label::indeterminate;
}

ParadoxClassification agreement_report(const point_null::Scenario& scenario,
                                       const point_null::PriorSpec& prior,
                                       const IntervalNullSpec& spec,
                                       double alpha,
                                       const num::QuadratureSettings& settings) {
  scenario.validate();
  prior.validate();
  spec.validate();
  if (!(alpha > 0.0) || !(alpha < 0.5)) {
    throw invalid_input("agreement_report: alpha must lie in (0, 0.5)");
  }

  ParadoxClassification report;
  report.p_value = 2.0 * num::std_normal_ccdf(std::fabs(scenario.z));
  // Decided in z-space so the just-significant boundary counts as a
  // rejection exactly, without roundoff through the p-value.
  const bool reject =
      std::fabs(scenario.z) >= point_null::z_from_alpha(alpha);
  report.point_null_frequentist =
      reject ? PointDecision::reject : PointDecision::retain;
  report.point_null_bayes_posterior =
      point_null::point_posterior(scenario, prior);

  // Counterfactual with the slab at unit scale: does the conflict survive?
  point_null::PriorSpec unit_prior = prior;
  if (std::holds_alternative<point_null::UniformSlab>(unit_prior.slab)) {
    unit_prior.slab = point_null::UniformSlab{1.0};
  } else {
    unit_prior.slab = point_null::ConjugateSlab{1.0};
  }
  const double unit_posterior =
      point_null::point_posterior(scenario, unit_prior);
  const bool unit_conflict = reject && unit_posterior > 1.0 - alpha;

  report.interval = interval_bf01(scenario, spec, settings);
  report.tost = tost_equivalence(scenario, spec.delta, alpha);
  report.interval_agreement =
      report.tost.concluded_equivalence && report.interval.log_bf01 > 0.0;
  report.label =
      classify(reject, report.point_null_bayes_posterior, unit_conflict,
               report.interval.log_bf01, report.tost.concluded_equivalence,
               alpha);
  return report;
}

}  // namespace jlp::interval_null
