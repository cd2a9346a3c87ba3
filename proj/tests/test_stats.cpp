#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "qpnn/rng.hpp"
#include "qpnn/stats.hpp"

using namespace qpnn;
using namespace qpnn::stats;

TEST_SUITE("stats") {

TEST_CASE("moments use the population convention") {
  const Moments m = moments({1.0, 2.0, 3.0, 4.0});
  CHECK(m.mean == doctest::Approx(2.5));
  CHECK(m.stddev == doctest::Approx(std::sqrt(1.25)));
  CHECK_THROWS_AS(moments({}), std::invalid_argument);
}

TEST_CASE("success threshold is mean minus one standard deviation") {
  CHECK(success_threshold({0.9, 0.8}) == doctest::Approx(0.80).epsilon(1e-12));
  CHECK(success_threshold({0.5, 0.5, 0.5}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(success_threshold({0.9}), std::invalid_argument);
}

TEST_CASE("plateau isolation splits clusters at half-decade gaps") {
  // two groups three decades apart: keep the low one
  const auto low = max_plateau_indices({1e-4, 2e-4, 1e-1, 2e-1, 1.5e-4});
  CHECK(low == std::vector<std::size_t>{0, 1, 4});
  // a chain with no gap wider than half a decade stays together
  const auto all = max_plateau_indices({1e-4, 2e-4, 5e-4, 1.2e-3});
  CHECK(all.size() == 4);
  // a gap of exactly half a decade does not split
  const auto exact = max_plateau_indices({1e-4, std::pow(10.0, -3.5)});
  CHECK(exact.size() == 2);
  // slightly wider does
  const auto split = max_plateau_indices({1e-4, std::pow(10.0, -3.49)});
  CHECK(split == std::vector<std::size_t>{0});
  // single value is its own plateau; zeros are floored, not fatal
  CHECK(max_plateau_indices({0.5}).size() == 1);
  CHECK(max_plateau_indices({0.0, 1e-16}).size() == 2);
}

TEST_CASE("plateau isolation recovers a planted low cluster") {
  Rng rng(31);
  std::vector<double> c;
  for (int i = 0; i < 60; ++i) c.push_back(1e-5 * std::exp(rng.normal(0, 0.3)));
  for (int i = 0; i < 40; ++i) c.push_back(1e-1 * std::exp(rng.normal(0, 0.3)));
  const auto plateau = max_plateau_indices(c);
  REQUIRE(plateau.size() == 60);
  for (const std::size_t i : plateau) CHECK(i < 60);
}

TEST_CASE("lognormal fit recovers synthetic parameters") {
  const double mu = -2.0, sigma = 0.5;
  Rng rng(17);
  std::vector<double> xs;
  for (int i = 0; i < 5000; ++i) xs.push_back(std::exp(rng.normal(mu, sigma)));
  const FitResult fit = fit_lognormal(xs);
  CHECK(fit.family == "lognormal");
  REQUIRE(fit.params.size() == 2);
  CHECK(fit.params[0] == doctest::Approx(mu).epsilon(0.02));
  CHECK(fit.params[1] == doctest::Approx(sigma).epsilon(0.05));
  CHECK(fit.mean ==
        doctest::Approx(std::exp(fit.params[0] +
                                 0.5 * fit.params[1] * fit.params[1])));
  CHECK(fit.ci_low < fit.mean);
  CHECK(fit.ci_high > fit.mean);
  CHECK(!fit.degenerate);
  CHECK_THROWS_AS(fit_lognormal({0.5, -0.1}), std::invalid_argument);
  CHECK_THROWS_AS(fit_lognormal({}), std::invalid_argument);
}

TEST_CASE("lognormal fit collapses cleanly on constant input") {
  const FitResult fit = fit_lognormal({0.25, 0.25, 0.25});
  CHECK(fit.degenerate);
  CHECK(fit.mean == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(fit.ci_low == fit.mean);
  CHECK(fit.ci_high == fit.mean);
}

TEST_CASE("beta fit recovers synthetic parameters") {
  // sample Beta(2, 5) through the inverse CDF
  const double a = 2.0, b = 5.0;
  Rng rng(23);
  std::vector<double> xs;
  for (int i = 0; i < 800; ++i)
    xs.push_back(inv_reg_inc_beta(a, b, rng.uniform()));
  const FitResult fit = fit_beta(xs);
  CHECK(fit.family == "beta");
  REQUIRE(fit.params.size() == 2);
  CHECK(fit.params[0] == doctest::Approx(a).epsilon(0.15));
  CHECK(fit.params[1] == doctest::Approx(b).epsilon(0.15));
  CHECK(fit.mean == doctest::Approx(fit.params[0] /
                                    (fit.params[0] + fit.params[1])));
  CHECK(fit.ci_low < fit.mean);
  CHECK(fit.ci_high > fit.mean);
  // central interval actually brackets 95% of the mass
  CHECK(reg_inc_beta(fit.params[0], fit.params[1], fit.ci_high) -
            reg_inc_beta(fit.params[0], fit.params[1], fit.ci_low) ==
        doctest::Approx(0.95).epsilon(1e-6));
}

TEST_CASE("beta fit tolerates values pinned to the boundary") {
  // exact ones appear whenever a trial hits machine-precision fidelity
  const FitResult fit = fit_beta({1.0, 0.999999, 0.999998, 1.0, 0.999997});
  CHECK(fit.params[0] > 0.0);
  CHECK(fit.mean > 0.999);
  CHECK(fit.mean <= 1.0);
  const FitResult point = fit_beta({0.7, 0.7, 0.7});
  CHECK(point.degenerate);
  CHECK(point.mean == doctest::Approx(0.7));
  CHECK(point.ci_low == point.ci_high);
}

TEST_CASE("special function spot values") {
  CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-12));
  CHECK(digamma(0.5) == doctest::Approx(-1.9635100260214235).epsilon(1e-12));
  CHECK(trigamma(1.0) == doctest::Approx(1.6449340668482264).epsilon(1e-12));
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-12));
  CHECK(log_gamma(0.5) ==
        doctest::Approx(0.5 * std::log(3.14159265358979323846))
            .epsilon(1e-12));
  CHECK_THROWS_AS(digamma(0.0), std::invalid_argument);
  CHECK_THROWS_AS(trigamma(-1.0), std::invalid_argument);
}

TEST_CASE("incomplete beta identities and inverse roundtrip") {
  CHECK(reg_inc_beta(1.0, 1.0, 0.37) == doctest::Approx(0.37).epsilon(1e-12));
  CHECK(reg_inc_beta(2.0, 2.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(reg_inc_beta(2.0, 2.0, 0.3) == doctest::Approx(0.216).epsilon(1e-12));
  CHECK(reg_inc_beta(3.0, 7.0, 0.0) == 0.0);
  CHECK(reg_inc_beta(3.0, 7.0, 1.0) == 1.0);
  for (const double p : {0.025, 0.5, 0.975}) {
    const double x = inv_reg_inc_beta(3.0, 7.0, p);
    CHECK(reg_inc_beta(3.0, 7.0, x) == doctest::Approx(p).epsilon(1e-9));
  }
  CHECK_THROWS_AS(reg_inc_beta(0.0, 1.0, 0.5), std::invalid_argument);
}

TEST_CASE("welch test separates what should be separated") {
  std::vector<double> hi, lo, same_a, same_b;
  Rng rng(41);
  for (int i = 0; i < 40; ++i) {
    hi.push_back(0.9 + rng.normal(0.0, 0.01));
    lo.push_back(0.8 + rng.normal(0.0, 0.01));
    same_a.push_back(rng.normal(0.0, 1.0));
    same_b.push_back(rng.normal(0.0, 1.0));
  }
  CHECK(welch_p_greater(hi, lo) < 1e-6);
  CHECK(welch_p_greater(lo, hi) > 0.999);
  const double p_same = welch_p_greater(same_a, same_b);
  CHECK(p_same > 0.05);
  CHECK_THROWS_AS(welch_p_greater({1.0}, {1.0, 2.0}), std::invalid_argument);
}

}  // TEST_SUITE
