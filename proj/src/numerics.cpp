#include "jlp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <sstream>

namespace jlp::num {

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kSqrt2 = 1.41421356237309504880;

// Rational Chebyshev approximation to erfc after W. J. Cody,
// "Rational Chebyshev approximations for the error function",
// Math. Comp. 23 (1969). Relative accuracy ~1e-16 across the three branches.
double erfc_cody(double x) {
  static const double a[5] = {3.1611237438705656, 113.864154151050156,
                              377.485237685302021, 3209.37758913846947,
                              0.185777706184603153};
  static const double b[4] = {23.6012909523441209, 244.024637934444173,
                              1282.61652607737228, 2844.23683343917062};
  static const double c[9] = {0.564188496988670089, 8.88314979438837594,
                              66.1191906371416295,  298.635138197400131,
                              881.95222124176909,   1712.04761263407058,
                              2051.07837782607147,  1230.33935479799725,
                              2.15311535474403846e-8};
  static const double d[8] = {15.7449261107098347, 117.693950891312499,
                              537.181101862009858, 1621.38957456669019,
                              3290.79923573345963, 4362.61909014324716,
                              3439.36767414372164, 1230.33935480374942};
  static const double p[6] = {0.305326634961232344, 0.360344899949804439,
                              0.125781726111229246, 0.0160837851487422766,
                              6.58749161529837803e-4, 0.0163153871373020978};
  static const double q[5] = {2.56852019228982242, 1.87295284992346047,
                              0.527905102951428412, 0.0605183413124413191,
                              0.00233520497626869185};
  constexpr double sqrpi = 0.56418958354775628695;  // 1/sqrt(pi)
  constexpr double thresh = 0.46875;
  constexpr double xbig = 26.543;
  constexpr double xsmall = 1.11e-16;

  const double y = std::fabs(x);
  double result;
  if (y <= thresh) {
    // erfc via erf on the central interval.
    const double ysq = (y > xsmall) ? y * y : 0.0;
    double xnum = a[4] * ysq;
    double xden = ysq;
    for (int i = 0; i < 3; ++i) {
      xnum = (xnum + a[i]) * ysq;
      xden = (xden + b[i]) * ysq;
    }
    const double erf_val = x * (xnum + a[3]) / (xden + b[3]);
    return 1.0 - erf_val;
  }
  if (y <= 4.0) {
    double xnum = c[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
      xnum = (xnum + c[i]) * y;
      xden = (xden + d[i]) * y;
    }
    result = (xnum + c[7]) / (xden + d[7]);
  } else if (y < xbig) {
    const double ysq = 1.0 / (y * y);
    double xnum = p[5] * ysq;
    double xden = ysq;
    for (int i = 0; i < 4; ++i) {
      xnum = (xnum + p[i]) * ysq;
      xden = (xden + q[i]) * ysq;
    }
    result = ysq * (xnum + p[4]) / (xden + q[4]);
    result = (sqrpi - result) / y;
  } else {
    result = 0.0;
  }
  // exp(-y^2) split to avoid the rounding of y*y for large y.
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  result *= std::exp(-ysq * ysq) * std::exp(-del);
  return (x < 0.0) ? 2.0 - result : result;
}

// Acklam's rational approximation to the normal quantile (~1e-9 relative),
// used as the starting point before Newton polish.
double quantile_initial(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  constexpr double p_high = 1.0 - p_low;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= p_high) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
            a[5]) *
           q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
           c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

}  // namespace

void QuadratureSettings::validate() const {
  if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) {
    throw invalid_input("QuadratureSettings: abs_tol must be positive");
  }
  if (!(rel_tol > 0.0) || !std::isfinite(rel_tol)) {
    throw invalid_input("QuadratureSettings: rel_tol must be positive");
  }
  if (max_subdivisions < 1) {
    throw invalid_input("QuadratureSettings: max_subdivisions must be >= 1");
  }
}

void RootBracket::validate() const {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw invalid_input("RootBracket: requires finite lo < hi");
  }
  if (!(tol > 0.0) || !std::isfinite(tol)) {
    throw invalid_input("RootBracket: tol must be positive");
  }
}

double std_normal_pdf(double x) {
  if (!std::isfinite(x)) {
    throw invalid_input("std_normal_pdf: non-finite input");
  }
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

double std_normal_cdf(double x) {
  if (!std::isfinite(x)) {
    throw invalid_input("std_normal_cdf: non-finite input");
  }
  return 0.5 * erfc_cody(-x / kSqrt2);
}

double std_normal_ccdf(double x) {
  if (!std::isfinite(x)) {
    throw invalid_input("std_normal_ccdf: non-finite input");
  }
  return 0.5 * erfc_cody(x / kSqrt2);
}

double std_normal_quantile(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw invalid_input("std_normal_quantile: p must lie in (0,1)");
  }
  double x = quantile_initial(p);
  // Two Newton steps on Phi drive the residual to machine level.
  for (int i = 0; i < 2; ++i) {
    const double density = std_normal_pdf(x);
    if (density < 1e-300) break;  // deep tail: the rational guess stands
    x -= (std_normal_cdf(x) - p) / density;
  }
  return x;
}

namespace {

// Gauss-Kronrod 7-15 pair on [-1, 1] (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {0.9914553711208126, 0.9491079123427585,
                            0.8648644233597691, 0.7415311855993944,
                            0.5860872354676911, 0.4058451513773972,
                            0.2077849550078985, 0.0};
constexpr double kWgk[8] = {0.02293532201052922, 0.06309209262997855,
                            0.1047900103222502,  0.1406532597155259,
                            0.1690047266392679,  0.1903505780647854,
                            0.2044329400752989,  0.2094821410847278};
constexpr double kWg[4] = {0.1294849661688697, 0.2797053914892767,
                           0.3818300505051189, 0.4179591836734694};

struct Panel {
  double lo;
  double hi;
  double value;
  double error;
  std::uint64_t seq;
};

struct PanelOrder {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.error != y.error) return x.error < y.error;
    return x.seq > y.seq;  // deterministic tie-break
  }
};

Panel evaluate_panel(const std::function<double(double)>& f, double lo,
                     double hi, std::uint64_t seq) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double kronrod = kWgk[7] * f(center);
  double gauss = kWg[3] * f(center);
  for (int j = 0; j < 7; ++j) {
    const double offset = half * kXgk[j];
    const double sum = f(center - offset) + f(center + offset);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) {
    std::ostringstream msg;
    msg << "integrate: non-finite integrand on [" << lo << ", " << hi << "]";
    throw invalid_input(msg.str());
  }
  return Panel{lo, hi, kronrod, std::fabs(kronrod - gauss), seq};
}

}  // namespace

double integrate(const std::function<double(double)>& f,
                 const std::vector<double>& breakpoints,
                 const QuadratureSettings& settings) {
  settings.validate();
  if (breakpoints.size() < 2) {
    throw invalid_input("integrate: need at least two breakpoints");
  }
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (!std::isfinite(breakpoints[i])) {
      throw invalid_input("integrate: non-finite breakpoint");
    }
    if (i > 0 && !(breakpoints[i - 1] < breakpoints[i])) {
      throw invalid_input("integrate: breakpoints must be strictly increasing");
    }
  }

  std::priority_queue<Panel, std::vector<Panel>, PanelOrder> queue;
  std::uint64_t seq = 0;
  double value = 0.0;
  double active_error = 0.0;
  double frozen_error = 0.0;  // panels too narrow to split further

  for (std::size_t i = 1; i < breakpoints.size(); ++i) {
    Panel panel = evaluate_panel(f, breakpoints[i - 1], breakpoints[i], seq++);
    value += panel.value;
    active_error += panel.error;
    queue.push(panel);
  }

  int splits = 0;
  const auto tolerance = [&] {
    return std::max(settings.abs_tol, settings.rel_tol * std::fabs(value));
  };
  while (active_error + frozen_error > tolerance()) {
    if (queue.empty() || frozen_error > tolerance()) {
      throw no_convergence("integrate: tolerance unreachable at machine width",
                           value);
    }
    if (splits >= settings.max_subdivisions) {
      throw no_convergence("integrate: subdivision budget exhausted", value);
    }
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const double scale =
        std::max({std::fabs(worst.lo), std::fabs(worst.hi), 1.0});
    if (worst.hi - worst.lo <=
        8.0 * std::numeric_limits<double>::epsilon() * scale) {
      active_error -= worst.error;
      frozen_error += worst.error;
      continue;
    }
    ++splits;
    Panel left = evaluate_panel(f, worst.lo, mid, seq++);
    Panel right = evaluate_panel(f, mid, worst.hi, seq++);
    value += left.value + right.value - worst.value;
    active_error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
  }
  return value;
}

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 const QuadratureSettings& settings) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw invalid_input("integrate: requires finite lo < hi");
  }
  return integrate(f, std::vector<double>{lo, hi}, settings);
}

double find_root(const std::function<double(double)>& f,
                 const RootBracket& bracket) {
  bracket.validate();
  constexpr int kMaxIterations = 200;

  double a = bracket.lo;
  double b = bracket.hi;
  double fa = f(a);
  double fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) {
    throw invalid_input("find_root: non-finite function value at bracket end");
  }
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw domain_error("find_root: no sign change across the bracket");
  }

  // Brent's method: inverse quadratic / secant steps guarded by bisection.
  double c = b;
  double fc = fb;
  double d = b - a;
  double e = d;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 =
        2.0 * std::numeric_limits<double>::epsilon() * std::fabs(b) +
        0.5 * bracket.tol;
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) return b;

    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      const double min1 = 3.0 * xm * q - std::fabs(tol1 * q);
      const double min2 = std::fabs(e * q);
      if (2.0 * p < std::min(min1, min2)) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    if (std::fabs(d) > tol1) {
      b += d;
    } else {
      b += (xm >= 0.0 ? tol1 : -tol1);
    }
    fb = f(b);
    if (!std::isfinite(fb)) {
      throw invalid_input("find_root: non-finite function value");
    }
  }
  throw no_convergence("find_root: iteration cap reached", b);
}

}  // namespace jlp::num
