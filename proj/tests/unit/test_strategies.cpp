#include <cmath>
#include <vector>

#include <doctest.h>

#include "fjlab/power_series.hpp"
#include "fjlab/rng.hpp"
#include "fjlab/strategies.hpp"
#include "helpers.hpp"

using namespace fjlab;

namespace {

double brute_moment(const Strategy& st, double a, int order) {
  double acc = 0.0;
  for (int s = 1; s <= st.pool_size(); ++s) {
    acc += st.pmf(s) * std::pow(static_cast<double>(s), order) * std::exp(-a * s);
  }
  return acc;
}

}  // namespace

TEST_SUITE("strategies") {
  TEST_CASE("pmfs are normalized") {
    std::vector<Strategy> all{Strategy::deterministic(3, 7), Strategy::uniform(5), Strategy::binomial(6, 0.35),
                              Strategy::power_series(5, 0.7, {1.0, 0.5, 0.25, 0.125, 0.0625}),
                              Strategy::explicit_pmf({0.2, 0.0, 0.8})};
    for (const Strategy& st : all) {
      double total = 0.0;
      for (int s = 1; s <= st.pool_size(); ++s) total += st.pmf(s);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
      CHECK_THROWS_AS(st.pmf(0), RangeError);
      CHECK_THROWS_AS(st.pmf(st.pool_size() + 1), RangeError);
    }
  }

  TEST_CASE("binomial pmf matches Pascal coefficients") {
    const int n = 9;
    const double p = 0.37, q = 1.0 - p;
    auto c = testutil::pascal(n);
    Strategy st = Strategy::binomial(n, p);
    double norm = 1.0 - std::pow(q, n);
    for (int s = 1; s <= n; ++s) {
      double oracle = c[n][static_cast<std::size_t>(s)] * std::pow(p, s) * std::pow(q, n - s) / norm;
      CHECK(st.pmf(s) == doctest::Approx(oracle).epsilon(1e-13));
    }
  }

  TEST_CASE("closed-form moments match brute-force sums") {
    std::vector<Strategy> all{Strategy::binomial(1, 0.4),  Strategy::binomial(2, 0.9),
                              Strategy::binomial(8, 0.15), Strategy::binomial(13, 1.0),
                              Strategy::uniform(1),        Strategy::uniform(2),
                              Strategy::uniform(9),        Strategy::deterministic(4, 6),
                              Strategy::power_series(7, 1.3, {2.0, 1.0, 4.0, 0.5, 0.25, 3.0, 1.0}),
                              Strategy::explicit_pmf({0.1, 0.4, 0.0, 0.5})};
    for (const Strategy& st : all) {
      for (double a : {0.0, 0.3, 1.7, 4.2}) {
        for (int order : {1, 2}) {
          double brute = brute_moment(st, a, order);
          CHECK(st.exp_moment(a, order) == doctest::Approx(brute).epsilon(1e-12));
        }
      }
    }
  }

  TEST_CASE("uniform second moment frozen values") {
    // n = 1: both moments collapse to e^{-a}.
    Strategy one = Strategy::uniform(1);
    CHECK(one.exp_moment(0.7, 1) == doctest::Approx(std::exp(-0.7)).epsilon(1e-14));
    CHECK(one.exp_moment(0.7, 2) == doctest::Approx(std::exp(-0.7)).epsilon(1e-14));
    // n = 2 at e^{-a} = 1/2: E[S e^{-aS}] = (1/2 + 2/4)/2 = 1/2 and
    // E[S^2 e^{-aS}] = (1/2 + 4/4)/2 = 3/4, worked by hand.
    Strategy two = Strategy::uniform(2);
    double a = std::log(2.0);
    CHECK(two.exp_moment(a, 1) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(two.exp_moment(a, 2) == doctest::Approx(0.75).epsilon(1e-13));
  }

  TEST_CASE("uniform moments stay accurate through the small-a switch") {
    Strategy st = Strategy::uniform(11);
    for (double a : {0.0, 1e-9, 1e-6, 5e-5, 2e-4, 1e-2}) {
      for (int order : {1, 2}) {
        CHECK(st.exp_moment(a, order) == doctest::Approx(brute_moment(st, a, order)).epsilon(1e-12));
      }
    }
    CHECK(st.exp_moment(0.0, 1) == doctest::Approx(6.0).epsilon(1e-14));
    CHECK(st.exp_moment(0.0, 2) == doctest::Approx(12.0 * 23.0 / 6.0).epsilon(1e-14));
  }

  TEST_CASE("truncated power series with binomial coefficients is binomial") {
    const int n = 6;
    const double p = 0.35;
    auto c = testutil::pascal(n);
    std::vector<double> coeffs;
    for (int k = 1; k <= n; ++k) coeffs.push_back(c[n][static_cast<std::size_t>(k)]);
    Strategy binom = Strategy::binomial(n, p);
    Strategy series = Strategy::power_series(n, p / (1.0 - p), coeffs);
    for (int s = 1; s <= n; ++s) CHECK(series.pmf(s) == doctest::Approx(binom.pmf(s)).epsilon(1e-12));
    for (double a : {0.2, 1.1}) {
      for (int order : {1, 2}) {
        CHECK(series.exp_moment(a, order) == doctest::Approx(binom.exp_moment(a, order)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("expected server counts") {
    CHECK(Strategy::uniform(7).expected_servers() == doctest::Approx(4.0));
    CHECK(Strategy::deterministic(4, 9).expected_servers() == doctest::Approx(4.0));
    double p = 0.45;
    int n = 5;
    double oracle = n * p / (1.0 - std::pow(1.0 - p, n));
    CHECK(Strategy::binomial(n, p).expected_servers() == doctest::Approx(oracle).epsilon(1e-13));
    CHECK(Strategy::explicit_pmf({0.25, 0.25, 0.5}).expected_servers() == doctest::Approx(2.25));
  }

  TEST_CASE("partial-scaling moments") {
    Strategy st = Strategy::explicit_pmf({0.5, 0.5});
    double c = 0.8;
    // phi = 0: every count keeps the same attenuation.
    CHECK(st.exp_moment_partial(c, 0.0, 1) == doctest::Approx(std::exp(-c) * st.exp_moment(0.0, 1)).epsilon(1e-13));
    // phi = 1/2 by hand.
    double oracle = 0.5 * std::exp(-c) + 0.5 * 2.0 * std::exp(-c * std::sqrt(2.0));
    CHECK(st.exp_moment_partial(c, 0.5, 1) == doctest::Approx(oracle).epsilon(1e-13));
    // phi = 1 is the plain moment.
    CHECK(st.exp_moment_partial(c, 1.0, 2) == doctest::Approx(st.exp_moment(c, 2)).epsilon(1e-14));
  }

  TEST_CASE("sampling matches the pmf") {
    Strategy st = Strategy::binomial(5, 0.4);
    Rng rng(11);
    const int n = 200000;
    std::vector<int> counts(6, 0);
    for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(st.sample(rng))];
    CHECK(counts[0] == 0);
    for (int s = 1; s <= 5; ++s) {
      double p = st.pmf(s);
      double se = std::sqrt(p * (1.0 - p) / n);
      CHECK(std::fabs(counts[static_cast<std::size_t>(s)] / static_cast<double>(n) - p) < 5.0 * se + 1e-12);
    }
  }

  TEST_CASE("factory validation") {
    CHECK_THROWS_AS(Strategy::binomial(4, 0.0), RangeError);
    CHECK_THROWS_AS(Strategy::binomial(4, 1.2), RangeError);
    CHECK_THROWS_AS(Strategy::binomial(0, 0.5), RangeError);
    CHECK_THROWS_AS(Strategy::uniform(0), RangeError);
    CHECK_THROWS_AS(Strategy::deterministic(5, 3), RangeError);
    CHECK_THROWS_AS(Strategy::deterministic(0), RangeError);
    CHECK_THROWS_AS(Strategy::power_series(3, 0.5, {0.0, 0.0, 0.0}), RangeError);
    CHECK_THROWS_AS(Strategy::power_series(2, 0.5, {1.0, 1.0, 1.0}), RangeError);
    CHECK_THROWS_AS(Strategy::power_series(2, -0.5, {1.0, 1.0}), RangeError);
    CHECK_THROWS_AS(Strategy::explicit_pmf({0.5, -0.1, 0.6}), RangeError);
    CHECK_THROWS_AS(Strategy::explicit_pmf({}), RangeError);
    CHECK_THROWS_AS(Strategy::explicit_pmf({0.0, 0.0}), RangeError);
  }

  TEST_CASE("moment argument validation") {
    Strategy st = Strategy::uniform(3);
    CHECK_THROWS_AS(st.exp_moment(-0.1, 1), RangeError);
    CHECK_THROWS_AS(st.exp_moment(0.5, 3), RangeError);
    CHECK_THROWS_AS(st.exp_moment_partial(0.5, 1.5, 1), RangeError);
  }

  TEST_CASE("generating-function sums for known families") {
    PowerSeriesFamily geo = PowerSeriesFamily::geometric();
    CHECK(geo.zeta(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(geo.zeta_prime(0.5) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(geo.zeta_second(0.5) == doctest::Approx(16.0).epsilon(1e-12));
    CHECK_THROWS_AS(geo.zeta(1.0), DivergenceError);
    CHECK_THROWS_AS(geo.zeta(-0.1), RangeError);
    CHECK(geo.zeta(0.0) == 0.0);

    PowerSeriesFamily expm([](std::uint64_t k) { return 1.0 / std::tgamma(static_cast<double>(k) + 1.0); });
    double x = 1.3;
    CHECK(expm.zeta(x) == doctest::Approx(std::expm1(x)).epsilon(1e-12));
    CHECK(expm.zeta_prime(x) == doctest::Approx(std::exp(x)).epsilon(1e-12));
    CHECK(expm.zeta_second(x) == doctest::Approx(std::exp(x)).epsilon(1e-12));
  }
}
