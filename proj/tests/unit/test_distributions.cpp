#include <cmath>

#include <doctest.h>

#include "fjlab/distributions.hpp"
#include "fjlab/rng.hpp"
#include "helpers.hpp"

using namespace fjlab;

TEST_SUITE("distributions") {
  TEST_CASE("exponential transforms are rate ratios") {
    Distribution d = Distribution::exponential(2.0);
    CHECK(d.mean() == doctest::Approx(0.5));
    CHECK(d.mgf(1.0) == doctest::Approx(2.0));
    CHECK(d.mgf(0.0) == doctest::Approx(1.0));
    CHECK(d.laplace(3.0) == doctest::Approx(0.4));
    CHECK(d.mgf_domain_sup() == doctest::Approx(2.0));
    CHECK_THROWS_AS(d.mgf(2.0), DomainError);
    CHECK_THROWS_AS(d.mgf(2.5), DomainError);
    CHECK_THROWS_AS(d.laplace(-0.1), RangeError);
  }

  TEST_CASE("uniform mgf matches quadrature") {
    double a = 0.001, b = 2.009;
    Distribution d = Distribution::uniform_interval(a, b);
    for (double t : {0.5, 1.7, -0.9}) {
      double oracle = testutil::integrate([&](double x) { return std::exp(t * x) / (b - a); }, a, b, 1e-14);
      CHECK(d.mgf(t) == doctest::Approx(oracle).epsilon(1e-10));
    }
    double oracle = testutil::integrate([&](double x) { return std::exp(-0.9 * x) / (b - a); }, a, b, 1e-14);
    CHECK(d.laplace(0.9) == doctest::Approx(oracle).epsilon(1e-10));
  }

  TEST_CASE("uniform mgf is stable near zero") {
    Distribution d = Distribution::uniform_interval(1.0, 3.0);
    // E[X] = 2, E[X^2] = 13/3.
    CHECK(std::fabs(d.mgf(1e-9) - (1.0 + 2e-9)) < 1e-15);
    double h = 1e-6;
    double slope = (d.mgf(h) - 1.0) / h;
    CHECK(slope == doctest::Approx(2.0 + 13.0 / 6.0 * h).epsilon(1e-9));
    CHECK(d.mgf(0.0) == 1.0);
  }

  TEST_CASE("deterministic transforms are pure exponentials") {
    Distribution d = Distribution::deterministic(0.75);
    CHECK(d.mean() == 0.75);
    CHECK(d.mgf(2.0) == doctest::Approx(std::exp(1.5)));
    CHECK(d.laplace(2.0) == doctest::Approx(std::exp(-1.5)));
    Rng rng(1);
    for (int i = 0; i < 5; ++i) CHECK(d.sample(rng) == 0.75);
  }

  TEST_CASE("mgf dominates the Jensen lower bound") {
    std::vector<Distribution> dists{Distribution::exponential(1.3), Distribution::uniform_interval(0.2, 1.9),
                                    Distribution::deterministic(0.6)};
    for (const Distribution& d : dists) {
      for (double t : {0.1, 0.5, 1.0}) {
        if (t >= d.mgf_domain_sup()) continue;
        CHECK(d.mgf(t) >= std::exp(t * d.mean()) - 1e-12);
      }
    }
  }

  TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(Distribution::exponential(0.0), RangeError);
    CHECK_THROWS_AS(Distribution::exponential(-1.0), RangeError);
    CHECK_THROWS_AS(Distribution::uniform_interval(2.0, 1.0), RangeError);
    CHECK_THROWS_AS(Distribution::uniform_interval(-0.5, 1.0), RangeError);
    CHECK_THROWS_AS(Distribution::deterministic(-0.1), RangeError);
  }

  TEST_CASE("thinning mixes the transform with mass at zero") {
    Distribution base = Distribution::exponential(1.5);
    TransformedDistribution thinned = TransformedDistribution::thinned(base, 0.3);
    for (double t : {0.2, 0.7, 1.2}) {
      CHECK(thinned.mgf(t) == doctest::Approx(0.7 + 0.3 * base.mgf(t)).epsilon(1e-14));
    }
    CHECK(thinned.mean() == doctest::Approx(0.3 / 1.5));
    Rng rng(5);
    TransformedDistribution never = TransformedDistribution::thinned(base, 0.0);
    for (int i = 0; i < 10; ++i) CHECK(never.sample(rng) == 0.0);
  }

  TEST_CASE("scaling divides work by servers to the exponent") {
    Distribution base = Distribution::exponential(1.0);
    TransformedDistribution scaled = TransformedDistribution::scaled(base, 4, 0.5);
    double divisor = std::pow(4.0, 0.5);
    for (double t : {0.3, 1.1, 1.9}) {
      CHECK(scaled.mgf(t) == doctest::Approx(base.mgf(t / divisor)).epsilon(1e-14));
    }
    CHECK(scaled.mgf_domain_sup() == doctest::Approx(divisor));
    CHECK(scaled.mean() == doctest::Approx(0.5));
  }

  TEST_CASE("samplers reproduce their means") {
    Rng rng(7);
    const int n = 200000;
    double acc = 0.0;
    Distribution e = Distribution::exponential(1.5);
    for (int i = 0; i < n; ++i) acc += e.sample(rng);
    double se = (1.0 / 1.5) / std::sqrt(static_cast<double>(n));
    CHECK(std::fabs(acc / n - 1.0 / 1.5) < 4.0 * se);

    acc = 0.0;
    Distribution u = Distribution::uniform_interval(1.0, 3.0);
    for (int i = 0; i < n; ++i) {
      double x = u.sample(rng);
      CHECK(x >= 1.0);
      CHECK(x <= 3.0);
      acc += x;
    }
    se = (2.0 / std::sqrt(12.0)) / std::sqrt(static_cast<double>(n));
    CHECK(std::fabs(acc / n - 2.0) < 4.0 * se);
  }

  TEST_CASE("substreams are deterministic and distinct") {
    Rng a = Rng::substream(42, {1, 2});
    Rng b = Rng::substream(42, {1, 2});
    Rng c = Rng::substream(42, {2, 1});
    bool all_equal = true;
    bool any_diff = false;
    for (int i = 0; i < 16; ++i) {
      std::uint64_t x = a.next_u64();
      all_equal = all_equal && x == b.next_u64();
      any_diff = any_diff || x != c.next_u64();
    }
    CHECK(all_equal);
    CHECK(any_diff);
  }
}
