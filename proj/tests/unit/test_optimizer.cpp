#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "fjlab/optimizer.hpp"

using namespace fjlab;

TEST_SUITE("optimizer") {
  TEST_CASE("vertex enumeration finds the best deterministic count") {
    double mu = 1.0, lambda = 0.5;
    for (double phi : {0.0, 0.5, 1.0}) {
      for (double sigma : {0.5, 2.0}) {
        PmfOptimum best = optimize_pmf(6, mu, lambda, phi, sigma);
        double check = std::numeric_limits<double>::infinity();
        for (int s = 1; s <= 6; ++s) {
          check = std::min(check, scaled_waiting_bound(mu, lambda, Strategy::deterministic(s, 6), phi, sigma));
        }
        CHECK(best.value == doctest::Approx(check).epsilon(1e-13));
        CHECK(best.strategy.fixed_servers() == best.servers);
      }
    }
  }

  TEST_CASE("no pmf beats the best vertex") {
    double mu = 1.0, lambda = 0.5, phi = 1.0, sigma = 1.5;
    PmfOptimum best = optimize_pmf(5, mu, lambda, phi, sigma);
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<double> w(5);
      for (double& x : w) x = unit(gen);
      double value = scaled_waiting_bound(mu, lambda, Strategy::explicit_pmf(w), phi, sigma);
      CHECK(value >= best.value - 1e-12);
    }
  }

  TEST_CASE("exact ties resolve to the smaller count") {
    // At sigma = ln2 / mu the one- and two-server waiting vertices agree:
    // e^{(lambda-mu)s} vs 2 e^{(lambda-2mu)s} coincide when e^{mu s} = 2.
    double mu = 1.0, lambda = 0.5, sigma = std::log(2.0);
    double v1 = scaled_waiting_bound(mu, lambda, Strategy::deterministic(1, 2), 1.0, sigma);
    double v2 = scaled_waiting_bound(mu, lambda, Strategy::deterministic(2, 2), 1.0, sigma);
    CHECK(v1 == doctest::Approx(v2).epsilon(1e-13));
    CHECK(optimize_pmf(2, mu, lambda, 1.0, sigma).servers == 1);
  }

  TEST_CASE("infeasible pools throw") {
    CHECK_THROWS_AS(optimize_pmf(2, 0.4, 1.0, 1.0, 1.0), StabilityError);
    CHECK(optimize_pmf(3, 0.4, 1.0, 1.0, 1.0).servers == 3);
    CHECK_THROWS_AS(optimize_pmf(0, 1.0, 0.5, 0.0, 1.0), RangeError);
  }

  TEST_CASE("monotonicity certificate endpoints and sign changes") {
    // eps > 1/2 certifies every pool of at least two servers with
    // pool*eps > 1.
    MonotonicityReport r = monotonicity_certificate(5, 0.8);
    CHECK(r.certified);
    CHECK(r.at_zero == doctest::Approx(4.0 - 1.0));
    CHECK(r.at_one == doctest::Approx(5.0 * 4.0 * (0.8 - 0.5)).epsilon(1e-13));
    // Small eps: the endpoint sum goes negative, no certificate.
    CHECK(!monotonicity_certificate(10, 0.18).certified);
    // Single server: nothing to certify.
    CHECK(!monotonicity_certificate(1, 0.9).certified);
    CHECK_THROWS_AS(monotonicity_certificate(3, 1.0), RangeError);
    CHECK_THROWS_AS(monotonicity_certificate(3, -0.1), RangeError);
  }

  TEST_CASE("certified boundary optimum at large thresholds") {
    double mu = 1.0, lambda = 0.4, sigma = 1.0;  // eps = 1 - 1/e > 1/2
    for (int pool : {2, 5, 10, 20}) {
      BinomialOptimum best = optimize_binomial_p(pool, mu, lambda, 1.0, sigma);
      CHECK(best.certified_boundary);
      CHECK(best.p == 1.0);
      // Grid cross-check: p = 1 really is the minimum.
      for (double p = 0.05; p < 1.0; p += 0.05) {
        CHECK(scaled_waiting_bound(mu, lambda, Strategy::binomial(pool, p), 1.0, sigma) >= best.value - 1e-12);
      }
    }
  }

  TEST_CASE("uncertified search approaches the open-boundary infimum") {
    // At small thresholds parallelism hurts: the binomial family's
    // infimum is its p -> 0 limit, the single-server vertex. The search
    // cannot attain it, but must get within grid resolution of it.
    double mu = 1.0, lambda = 0.4, sigma = 0.2;  // eps < 1/2
    BinomialOptimum best = optimize_binomial_p(10, mu, lambda, 1.0, sigma, 1e-3);
    CHECK(!best.certified_boundary);
    PmfOptimum vertex = optimize_pmf(10, mu, lambda, 1.0, sigma);
    CHECK(vertex.servers == 1);
    CHECK(best.value >= vertex.value - 1e-12);
    CHECK(best.value <= vertex.value * 1.02);
    CHECK(best.p <= 2e-3);
  }

  TEST_CASE("response objective is searched, not certified") {
    BinomialOptimum best = optimize_binomial_p(6, 1.0, 0.4, 1.0, 1.0, 1e-3, BoundObjective::response);
    CHECK(!best.certified_boundary);
    double grid_best = std::numeric_limits<double>::infinity();
    for (double p = 1e-3; p <= 1.0; p += 1e-3) {
      grid_best = std::min(grid_best,
                           scaled_response_bound(1.0, 0.4, Strategy::binomial(6, std::min(p, 1.0)), 1.0, 1.0));
    }
    CHECK(best.value <= grid_best + 1e-9);
  }

  TEST_CASE("budget inversion hits the target mean") {
    BudgetOptimum b = optimize_budget(2, 1.5);
    CHECK(std::fabs(b.p - 2.0 / 3.0) <= 1e-9);
    CHECK(std::fabs(b.expected_servers - 1.5) <= 1e-9);
    for (double budget : {1.3, 2.5, 6.9}) {
      BudgetOptimum r = optimize_budget(7, budget);
      CHECK(std::fabs(r.expected_servers - budget) <= 1e-9);
      CHECK(std::fabs(Strategy::binomial(7, r.p).expected_servers() - budget) <= 1e-9);
    }
  }

  TEST_CASE("budget edge cases") {
    BudgetOptimum all = optimize_budget(4, 7.0);
    CHECK(all.p == 1.0);
    CHECK(all.expected_servers == doctest::Approx(4.0));
    BudgetOptimum one = optimize_budget(4, 1.0);
    CHECK(one.p == 0.0);
    CHECK(one.strategy.kind() == StrategyKind::deterministic);
    CHECK(one.strategy.fixed_servers() == 1);
    CHECK_THROWS_AS(optimize_budget(4, 0.8), InfeasibleError);
  }

  TEST_CASE("bound inversion") {
    auto bound = [](double sigma) { return std::exp(-0.1 * sigma); };
    double sigma = invert_bound(bound, 1e-3);
    CHECK(std::fabs(sigma - std::log(1000.0) / 0.1) < 1e-6);
    CHECK(invert_bound([](double) { return 0.5; }, 0.9) == 0.0);
    CHECK_THROWS_AS(invert_bound([](double) { return 0.5; }, 0.1), InfeasibleError);
    CHECK_THROWS_AS(invert_bound(bound, 1.5), RangeError);
  }
}
