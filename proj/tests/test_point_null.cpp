#include <doctest.h>

#include <cmath>
#include <vector>

#include "jlp/point_null.hpp"
#include "jlp/numerics.hpp"

namespace pn = jlp::point_null;

TEST_CASE("just-significant mean at the usual levels") {
  CHECK(pn::just_significant_mean(0.0, 1.0, 100, 0.05) ==
        doctest::Approx(0.196).epsilon(1e-3));
  CHECK(std::fabs(pn::just_significant_mean(0.0, 1.0, 100, 0.05) -
                  0.19599639845400543) < 1e-12);
  // alpha -> 1 collapses the offset entirely.
  CHECK(pn::just_significant_mean(5.0, 2.0, 4, 1.0 - 1e-12) ==
        doctest::Approx(5.0).epsilon(1e-9));
  CHECK(std::fabs(pn::just_significant_mean(0.0, 1.0, 1000, 0.05) -
                  0.061979503230456163) < 1e-12);
  CHECK_THROWS_AS(pn::just_significant_mean(0.0, 1.0, 100, 0.0),
                  jlp::invalid_input);
  CHECK_THROWS_AS(pn::just_significant_mean(0.0, 1.0, 100, 1.0),
                  jlp::invalid_input);
}

TEST_CASE("two-sided p-value of the just-significant mean equals alpha") {
  for (double alpha : {0.05, 0.01, 0.32}) {
    const std::uint64_t n = 400;
    const double mean = pn::just_significant_mean(0.0, 2.0, n, alpha);
    const double z = mean * std::sqrt(static_cast<double>(n)) / 2.0;
    const double p = 2.0 * jlp::num::std_normal_ccdf(z);
    CHECK(std::fabs(p - alpha) < 1e-12);
  }
}

TEST_CASE("width-free posterior reproduces the strong-contrast row") {
  // Just-significant at alpha = 0.05 with the published minimum n.
  CHECK(std::fabs(pn::lindley_posterior(0.5, 1.9599640, 1.0, 105685) - 0.95) <
        5e-5);
}

TEST_CASE("width-free posterior at n = 100") {
  CHECK(std::fabs(pn::lindley_posterior(0.5, 1.96, 1.0, 100) -
                  0.36885001272434911) < 1e-12);
}

TEST_CASE("width-free posterior decreases in |z|") {
  const double at_zero = pn::lindley_posterior(0.3, 0.0, 1.0, 50);
  const double at_five = pn::lindley_posterior(0.3, 5.0, 1.0, 50);
  CHECK(at_zero > at_five);
}

TEST_CASE("degenerate spike mass is rejected") {
  CHECK_THROWS_AS(pn::lindley_posterior(0.0, 1.0, 1.0, 10),
                  jlp::invalid_input);
  CHECK_THROWS_AS(pn::lindley_posterior(1.0, 1.0, 1.0, 10),
                  jlp::invalid_input);
}

TEST_CASE("explicit-width posterior: width one is the width-free form") {
  for (std::uint64_t n : {10ULL, 1000ULL, 123456ULL}) {
    const double lhs = pn::bartlett_posterior(0.4, 2.2, 1.5, n, 1.0);
    const double rhs = pn::lindley_posterior(0.4, 2.2, 1.5, n);
    CHECK(lhs == rhs);  // bit-for-bit
  }
}

TEST_CASE("explicit-width posterior values and width monotonicity") {
  CHECK(std::fabs(pn::bartlett_posterior(0.5, 1.96, 1.0, 100, 10.0) -
                  0.85388863205511965) < 1e-12);
  CHECK(pn::bartlett_posterior(0.5, 2.5, 1.0, 100, 1e8) > 0.999999);
  double previous = 0.0;
  for (double width = 0.5; width <= 1e9; width *= 10.0) {
    const double value = pn::bartlett_posterior(0.5, 2.5, 1.0, 100, width);
    CHECK(value > previous);
    previous = value;
  }
  CHECK_THROWS_AS(pn::bartlett_posterior(0.5, 2.5, 1.0, 100, 0.0),
                  jlp::invalid_input);
  CHECK_THROWS_AS(pn::bartlett_posterior(0.5, 2.5, 1.0, 100, -2.0),
                  jlp::invalid_input);
}

TEST_CASE("conjugate Bayes factor closed-form points") {
  CHECK(std::fabs(pn::conjugate_bf01(0.0, 3, 1.0) - 2.0) < 1e-12);
  CHECK(std::fabs(pn::conjugate_bf01(1.9599640, 16816, 1.0) - 19.0) < 1e-3);
  CHECK(std::fabs(pn::conjugate_bf01(2.5, 100, 1.0) - 0.45543642336144708) <
        1e-12);
  CHECK(pn::conjugate_bf01(1.7, 50, 0.0) == 1.0);
}

TEST_CASE("conjugate Bayes factor growth laws") {
  // sqrt(n) law at fixed tau.
  const double ratio_n = pn::conjugate_bf01(1.96, 4000000, 1.0) /
                         pn::conjugate_bf01(1.96, 1000000, 1.0);
  CHECK(std::fabs(ratio_n - 2.0) < 0.02);
  // Linear-in-tau law at fixed data.
  const double ratio_tau = pn::conjugate_bf01(2.5, 100, 4000.0) /
                           pn::conjugate_bf01(2.5, 100, 1000.0);
  CHECK(std::fabs(ratio_tau - 4.0) < 0.04);
}

TEST_CASE("posterior odds from a Bayes factor") {
  const auto even = pn::posterior_from_bf(19.0, 0.5);
  CHECK(std::fabs(even.posterior_h0 - 0.95) < 1e-15);
  CHECK(pn::posterior_from_bf(1.0, 0.5).posterior_h0 == 0.5);
  const auto fig = pn::posterior_from_bf(0.45544, 0.5);
  CHECK(std::fabs(fig.posterior_odds - 0.5 / 0.5 * 0.45544) < 1e-15);
  CHECK(fig.posterior_h0 == doctest::Approx(0.3129).epsilon(2e-4));
  CHECK_THROWS_AS(pn::posterior_from_bf(0.0, 0.5), jlp::invalid_input);
  CHECK_THROWS_AS(pn::posterior_from_bf(2.0, 1.0), jlp::invalid_input);
}

TEST_CASE("posterior odds round-trip across a log grid") {
  for (double bf = 1e-6; bf <= 1e6; bf *= 10.0) {
    for (double c : {0.1, 0.5, 0.9}) {
      const auto report = pn::posterior_from_bf(bf, c);
      const double odds = c / (1.0 - c) * bf;
      CHECK(std::fabs(report.posterior_odds - odds) <= 1e-12 * odds);
      CHECK(std::fabs(report.posterior_h0 - odds / (1.0 + odds)) <= 1e-12);
    }
  }
}

TEST_CASE("two phenomena: growing n and growing slab both drive H0 home") {
  // Fixed prior, growing n.
  double previous = 0.0;
  for (std::uint64_t n = 100; n <= 100000000ULL; n *= 10) {
    const auto report =
        pn::posterior_from_bf(pn::conjugate_bf01(1.96, n, 1.0), 0.5);
    CHECK(report.posterior_h0 > previous);
    previous = report.posterior_h0;
  }
  CHECK(previous > 0.999);
  // Fixed data, growing tau.
  previous = 0.0;
  for (double tau = 1.0; tau <= 1e4; tau *= 10.0) {
    const auto report =
        pn::posterior_from_bf(pn::conjugate_bf01(2.5, 100, tau), 0.5);
    CHECK(report.posterior_h0 > previous);
    previous = report.posterior_h0;
  }
  CHECK(previous > 0.99);
}

TEST_CASE("log-space evaluation survives extreme z and n") {
  const double deep = pn::lindley_posterior(0.5, 40.0, 1.0, 1000000000000ULL);
  CHECK(std::isfinite(deep));
  CHECK(deep >= 0.0);
  CHECK(deep <= 1.0);
  const double huge = pn::bartlett_posterior(0.5, 1.96, 1.0, 1000000000000ULL,
                                             1.0);
  CHECK(huge > 0.999);
  CHECK(huge <= 1.0);
}

TEST_CASE("calibrated odds: cancellation mode approaches its closed limit") {
  pn::CalibrationSpec spec;
  spec.mode = pn::CalibrationMode::odds_cancellation;
  spec.constant = 1.0;
  const double limit = std::sqrt(100.0) * std::exp(-0.5 * 2.5 * 2.5);
  const auto wide = pn::calibrated_posterior_odds(2.5, 100, 1e6, spec);
  CHECK(std::fabs(wide.odds - limit) / limit < 0.01);
  CHECK(std::fabs(wide.odds - 0.43936933623407417) < 1e-9);
  CHECK(std::fabs(wide.limit_odds - limit) < 1e-15);
  const auto narrower = pn::calibrated_posterior_odds(2.5, 100, 1e4, spec);
  CHECK(std::fabs(narrower.odds - wide.odds) / wide.odds < 0.01);
}

TEST_CASE("calibrated odds: literal mode") {
  pn::CalibrationSpec spec;
  spec.mode = pn::CalibrationMode::literal;
  spec.constant = 0.1;
  const auto result = pn::calibrated_posterior_odds(2.5, 100, 5.0, spec);
  CHECK(result.rho0 == doctest::Approx(0.5).epsilon(1e-12));
  // rho0 = 1/2 means even prior odds, so the odds are the Bayes factor.
  CHECK(std::fabs(result.odds - pn::conjugate_bf01(2.5, 100, 5.0)) < 1e-12);

  CHECK_THROWS_AS(pn::calibrated_posterior_odds(2.5, 100, 10.0, spec),
                  jlp::domain_error);
  try {
    pn::calibrated_posterior_odds(2.5, 100, 25.0, spec);
    FAIL("expected domain_error");
  } catch (const jlp::domain_error& err) {
    CHECK(std::string(err.what()).find("1/k") != std::string::npos);
    CHECK(std::string(err.what()).find("10") != std::string::npos);
  }
}

TEST_CASE("point posterior dispatches on the slab type") {
  const auto scenario = pn::Scenario::from_z(0.0, 1.0, 100, 2.5);
  pn::PriorSpec uniform;
  uniform.mass_on_null = 0.5;
  uniform.slab = pn::UniformSlab{10.0};
  CHECK(pn::point_posterior(scenario, uniform) ==
        pn::bartlett_posterior(0.5, 2.5, 1.0, 100, 10.0));

  pn::PriorSpec conjugate;
  conjugate.mass_on_null = 0.5;
  conjugate.slab = pn::ConjugateSlab{1.0};
  const double via_bf =
      pn::posterior_from_bf(pn::conjugate_bf01(2.5, 100, 1.0), 0.5)
          .posterior_h0;
  CHECK(std::fabs(pn::point_posterior(scenario, conjugate) - via_bf) < 1e-14);
}

TEST_CASE("scenario construction from mean and from z agree") {
  const auto from_mean = pn::Scenario::from_mean(0.0, 1.0, 100, 0.196);
  CHECK(std::fabs(from_mean.z - 1.96) < 1e-12);
  CHECK(std::fabs(from_mean.sample_mean() - 0.196) < 1e-15);
  CHECK_THROWS_AS(pn::Scenario::from_z(0.0, -1.0, 10, 1.0),
                  jlp::invalid_input);
  CHECK_THROWS_AS(pn::Scenario::from_z(0.0, 1.0, 0, 1.0), jlp::invalid_input);
}

TEST_CASE("z and alpha must agree when both define the boundary statistic") {
  CHECK_NOTHROW(pn::require_z_alpha_consistent(1.9599639845400545, 0.05));
  CHECK_THROWS_AS(pn::require_z_alpha_consistent(1.96, 0.05),
                  jlp::invalid_input);
  // The two-decimal quote is the consistent value in quote mode.
  CHECK_NOTHROW(pn::require_z_alpha_consistent(1.96, 0.05, true));
  CHECK(pn::quoted_z_from_alpha(0.05) == 1.96);
}
