#pragma once

#include <functional>
#include <vector>

#include "jlp/errors.hpp"

namespace jlp::num {

/// Tolerances and budget for adaptive quadrature. The estimate is accepted
/// once the accumulated error bound drops below
/// max(abs_tol, rel_tol * |estimate|).
struct QuadratureSettings {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 2000;

  void validate() const;
};

/// A sign-changing bracket [lo, hi] for root finding, with the width
/// tolerance at which the root is accepted.
struct RootBracket {
  double lo;
  double hi;
  double tol = 1e-9;

  void validate() const;
};

/// Standard normal density.
double std_normal_pdf(double x);

/// Standard normal CDF, accurate to about 1e-15 absolute over the real line.
double std_normal_cdf(double x);

/// Upper tail 1 - Phi(x), with full relative accuracy for large x.
double std_normal_ccdf(double x);

/// Inverse of std_normal_cdf for p in (0,1). Rational initial guess polished
/// by Newton steps on the CDF; |Phi(result) - p| <= 1e-12.
double std_normal_quantile(double p);

/// Adaptive Gauss-Kronrod (7-15) quadrature of f over [lo, hi].
/// Panels are bisected worst-error-first until the tolerance is met; if the
/// subdivision budget runs out a no_convergence carrying the best estimate
/// is thrown.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSettings& settings = {});

/// Same, but seeded with user breakpoints (sorted, distinct, spanning the
/// integration range). Lets callers pre-split around known sharp features.
double integrate(const std::function<double(double)>& f,
                 const std::vector<double>& breakpoints,
                 const QuadratureSettings& settings = {});

/// Brent-style bracketed root finding: bisection with secant / inverse
/// quadratic acceleration. Requires f(lo) and f(hi) of opposite sign.
double find_root(const std::function<double(double)>& f,
                 const RootBracket& bracket);

}  // namespace jlp::num
