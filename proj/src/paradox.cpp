#include "jlp/paradox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "jlp/numerics.hpp"
#include "jlp/point_null.hpp"

namespace jlp::paradox {

namespace {

constexpr double kTwoPi = 6.28318530717958647693;

void check_probability_open(double p, const char* name) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw invalid_input(std::string(name) + " must lie strictly in (0,1)");
  }
}

double two_sided_p_value(double z) {
  return 2.0 * num::std_normal_ccdf(std::fabs(z));
}

// log posterior odds for H0 as a function of real-valued n.
double log_posterior_odds(const StrongContrastQuery& query, double z,
                          double n) {
  const double prior_log_odds =
      std::log(query.c) - std::log1p(-query.c);
  if (query.setup == Setup::lindley_uniform) {
    return point_null::spike_slab_log_posterior_odds(query.c, z, query.sigma,
                                                     n, 1.0);
  }
  return prior_log_odds + point_null::conjugate_log_bf01(z, n, query.tau);
}

}  // namespace

void StrongContrastQuery::validate() const {
  if (!(alpha > 0.0) || !(alpha < 0.5)) {
    throw invalid_input("StrongContrastQuery: alpha must lie in (0, 0.5)");
  }
  check_probability_open(c, "StrongContrastQuery: c");
  if (setup == Setup::normal_conjugate) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
      throw invalid_input("StrongContrastQuery: tau must be positive");
    }
  } else {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
      throw invalid_input("StrongContrastQuery: sigma must be positive");
    }
  }
}

double lindley_min_n_closed_form(double alpha, double c, double sigma) {
  const double z = point_null::z_from_alpha(alpha);
  const double prior_ratio = (1.0 - c) / c;
  const double odds_ratio = (1.0 - alpha) / alpha;
  return kTwoPi * sigma * sigma * prior_ratio * prior_ratio * odds_ratio *
         odds_ratio * std::exp(z * z);
}

std::uint64_t min_n_strong_contrast(const StrongContrastQuery& query) {
  query.validate();
  const double z = point_null::z_from_alpha(query.alpha);
  const double target = std::log1p(-query.alpha) - std::log(query.alpha);

  const auto gap = [&](double n) {
    return log_posterior_odds(query, z, n) - target;
  };

  if (gap(1.0) >= 0.0) return 1;

  // The conjugate posterior dips before growing; root-find on the rising
  // branch only. The Lindley form is increasing everywhere.
  double lo = 1.0;
  if (query.setup == Setup::normal_conjugate) {
    lo = std::max(1.0, (z * z - 1.0) / (query.tau * query.tau));
  }
  double hi = std::max(2.0 * lo, 2.0);
  const double cap = static_cast<double>(kSampleSizeCap);
  while (gap(hi) < 0.0) {
    if (hi >= cap) {
      std::ostringstream msg;
      msg << "min_n_strong_contrast: no solution at or below n = "
          << kSampleSizeCap;
      throw no_convergence(msg.str(), hi);
    }
    hi = std::min(hi * 2.0, cap);
  }

  const double root =
      num::find_root(gap, num::RootBracket{lo, hi, 0.5});

  // Smallest integer n with posterior >= 1 - alpha, by direct evaluation
  // around the real root.
  std::uint64_t candidate =
      static_cast<std::uint64_t>(std::max(1.0, std::floor(root) - 2.0));
  while (gap(static_cast<double>(candidate)) < 0.0) {
    ++candidate;
    if (candidate > kSampleSizeCap) {
      throw no_convergence("min_n_strong_contrast: refinement ran past cap",
                           static_cast<double>(candidate));
    }
  }
  return candidate;
}

CurveSeries lindley_curve(double z, double tau, double c,
                          std::span<const std::uint64_t> n_grid) {
  if (!std::isfinite(z)) throw invalid_input("lindley_curve: z must be finite");
  if (!(tau > 0.0)) throw invalid_input("lindley_curve: tau must be positive");
  check_probability_open(c, "lindley_curve: c");
  if (n_grid.empty()) throw invalid_input("lindley_curve: empty n grid");
  for (std::size_t i = 1; i < n_grid.size(); ++i) {
    if (!(n_grid[i - 1] < n_grid[i])) {
      throw invalid_input("lindley_curve: n grid must be strictly increasing");
    }
  }
  if (n_grid.front() < 1) {
    throw invalid_input("lindley_curve: n grid entries must be >= 1");
  }

  const double p_value = two_sided_p_value(z);
  CurveSeries series;
  series.axis_label = "n";
  series.points.reserve(n_grid.size());
  for (std::uint64_t n : n_grid) {
    const double bf = point_null::conjugate_bf01(z, n, tau);
    const double posterior = point_null::posterior_from_bf(bf, c).posterior_h0;
    series.points.push_back(
        CurvePoint{static_cast<double>(n), posterior, p_value});
  }
  return series;
}

CurveSeries bartlett_curve(double z, std::uint64_t n, double c,
                           std::span<const double> tau_grid) {
  if (!std::isfinite(z)) {
    throw invalid_input("bartlett_curve: z must be finite");
  }
  if (n < 1) throw invalid_input("bartlett_curve: n must be >= 1");
  check_probability_open(c, "bartlett_curve: c");
  if (tau_grid.empty()) throw invalid_input("bartlett_curve: empty tau grid");
  for (std::size_t i = 0; i < tau_grid.size(); ++i) {
    if (!(tau_grid[i] > 0.0) || !std::isfinite(tau_grid[i])) {
      throw invalid_input("bartlett_curve: tau entries must be positive");
    }
    if (i > 0 && !(tau_grid[i - 1] < tau_grid[i])) {
      throw invalid_input(
          "bartlett_curve: tau grid must be strictly increasing");
    }
  }

  const double p_value = two_sided_p_value(z);
  CurveSeries series;
  series.axis_label = "tau";
  series.points.reserve(tau_grid.size());
  for (double tau : tau_grid) {
    const double bf = point_null::conjugate_bf01(z, n, tau);
    const double posterior = point_null::posterior_from_bf(bf, c).posterior_h0;
    series.points.push_back(CurvePoint{tau, posterior, p_value});
  }
  return series;
}

double ConflictZone::probability_null_true() const {
  if (empty) return 0.0;
  const double upper_mass =
      std::isinf(z_hi) ? 0.0 : num::std_normal_ccdf(z_hi);
  return 2.0 * (num::std_normal_ccdf(z_lo) - upper_mass);
}

ConflictZone conflict_zone(std::uint64_t n, double alpha, double tau, double c,
                           double posterior_threshold) {
  if (n < 1) throw invalid_input("conflict_zone: n must be >= 1");
  check_probability_open(alpha, "conflict_zone: alpha");
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw invalid_input("conflict_zone: tau must be positive");
  }
  check_probability_open(c, "conflict_zone: c");
  if (!(posterior_threshold >= 0.0) || !(posterior_threshold < 1.0)) {
    throw invalid_input("conflict_zone: threshold must lie in [0,1)");
  }

  const double z_reject = point_null::z_from_alpha(alpha);
  const double prior_log_odds = std::log(c) - std::log1p(-c);
  const auto log_odds_at = [&](double z) {
    return prior_log_odds +
           point_null::conjugate_log_bf01(z, static_cast<double>(n), tau);
  };

  ConflictZone zone;
  if (posterior_threshold == 0.0) {
    // Vacuous threshold: the zone is the whole rejection region.
    zone.empty = false;
    zone.z_lo = z_reject;
    zone.z_hi = std::numeric_limits<double>::infinity();
    return zone;
  }

  const double threshold_log_odds =
      std::log(posterior_threshold) - std::log1p(-posterior_threshold);
  const auto gap = [&](double z) {
    return log_odds_at(z) - threshold_log_odds;
  };

  // The posterior is strictly decreasing in |z|; a nonempty zone needs the
  // threshold met at the rejection boundary itself.
  if (!(gap(z_reject) > 0.0)) {
    return zone;
  }
  double hi = z_reject + 1.0;
  while (gap(hi) >= 0.0) {
    hi *= 2.0;
    if (hi > 1e8) {
      throw no_convergence("conflict_zone: posterior never crosses threshold",
                           hi);
    }
  }
  zone.empty = false;
  zone.z_lo = z_reject;
  zone.z_hi = num::find_root(gap, num::RootBracket{z_reject, hi, 1e-9});
  return zone;
}

namespace {

// splitmix64 finalizer; full-period, statistically strong output scrambling.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic substream for one replicate, independent of scheduling.
class ReplicateStream {
 public:
  ReplicateStream(std::uint64_t seed, std::uint64_t replicate)
      : state_(mix64(seed ^ mix64(replicate ^ 0xA0761D6478BD642FULL))) {}

  double next_uniform() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t x = state_;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    x ^= x >> 31;
    // (0,1): 53 mantissa bits, offset off the endpoints.
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
  }

  double next_normal() { return num::std_normal_quantile(next_uniform()); }

 private:
  std::uint64_t state_;
};

}  // namespace

SimulationResult simulate_conflict_rate(std::uint64_t n, double alpha,
                                        double tau, double c, TruthModel truth,
                                        std::uint64_t reps, std::uint64_t seed,
                                        unsigned workers) {
  if (n < 1) throw invalid_input("simulate_conflict_rate: n must be >= 1");
  check_probability_open(alpha, "simulate_conflict_rate: alpha");
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw invalid_input("simulate_conflict_rate: tau must be positive");
  }
  check_probability_open(c, "simulate_conflict_rate: c");
  if (reps < 1) throw invalid_input("simulate_conflict_rate: reps must be >= 1");
  if (workers < 1) {
    throw invalid_input("simulate_conflict_rate: workers must be >= 1");
  }

  const double sqrt_n = std::sqrt(static_cast<double>(n));
  const double prior_log_odds = std::log(c) - std::log1p(-c);
  const auto is_conflict = [&](double z) {
    const double p = two_sided_p_value(z);
    if (!(p < alpha)) return false;
    const double log_odds =
        prior_log_odds +
        point_null::conjugate_log_bf01(z, static_cast<double>(n), tau);
    return log_odds > 0.0;  // posterior of H0 above 1/2
  };

  const auto run_replicate = [&](std::uint64_t index) {
    ReplicateStream stream(seed, index);
    double z;
    if (truth == TruthModel::null_true) {
      z = stream.next_normal();
    } else {
      // Mixture truth: slab effects are drawn from the conjugate normal slab
      // (scale tau * sigma) and standardized; theta0 and sigma cancel.
      const double pick_null = stream.next_uniform();
      if (pick_null < c) {
        z = stream.next_normal();
      } else {
        const double effect = stream.next_normal();
        const double noise = stream.next_normal();
        z = sqrt_n * tau * effect + noise;
      }
    }
    return is_conflict(z);
  };

  const unsigned used_workers = static_cast<unsigned>(
      std::min<std::uint64_t>(workers, reps));
  std::uint64_t conflicts = 0;
  if (used_workers == 1) {
    for (std::uint64_t i = 0; i < reps; ++i) {
      conflicts += run_replicate(i) ? 1 : 0;
    }
  } else {
    std::vector<std::uint64_t> counts(used_workers, 0);
    std::vector<std::thread> pool;
    pool.reserve(used_workers);
    const std::uint64_t chunk = reps / used_workers;
    const std::uint64_t remainder = reps % used_workers;
    std::uint64_t begin = 0;
    for (unsigned w = 0; w < used_workers; ++w) {
      const std::uint64_t size = chunk + (w < remainder ? 1 : 0);
      const std::uint64_t end = begin + size;
      pool.emplace_back([&, w, begin, end] {
        std::uint64_t local = 0;
        for (std::uint64_t i = begin; i < end; ++i) {
          local += run_replicate(i) ? 1 : 0;
        }
        counts[w] = local;
      });
      begin = end;
    }
    for (auto& thread : pool) thread.join();
    for (std::uint64_t count : counts) conflicts += count;
  }

  SimulationResult result;
  result.conflicts = conflicts;
  result.reps = reps;
  result.seed = seed;
  result.workers = workers;
  result.rate = static_cast<double>(conflicts) / static_cast<double>(reps);
  result.std_error = std::sqrt(result.rate * (1.0 - result.rate) /
                               static_cast<double>(reps));
  return result;
}

}  // namespace jlp::paradox
