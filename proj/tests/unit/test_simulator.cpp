#include <cmath>
#include <vector>

#include <doctest.h>

#include "fjlab/simulator.hpp"

using namespace fjlab;

namespace {

SimulationConfig base_config(FJSystem system, Strategy strategy) {
  return SimulationConfig{std::move(system), std::move(strategy)};
}

}  // namespace

TEST_SUITE("simulator") {
  TEST_CASE("single-queue mean waiting matches theory") {
    // Poisson arrivals at 0.5 against exponential service at 1: mean
    // stationary waiting is rho / (mu - lambda) = 1.
    SimulationConfig cfg = base_config(
        FJSystem::homogeneous(1, Distribution::exponential(1.0), Distribution::exponential(0.5)),
        Strategy::deterministic(1, 1));
    cfg.n_jobs = 400000;
    cfg.replications = 4;
    cfg.threads = 4;
    cfg.seed = 2024;
    SimulationResult result = simulate(cfg);
    CHECK(std::fabs(result.mean_waiting() - 1.0) < 0.05);
    // P(W >= 2) = rho e^{-(mu-lambda) 2}.
    double tail = 0.5 * std::exp(-0.5 * 2.0);
    CcdfEstimate est = result.waiting_ccdf_batch(2.0);
    CHECK(std::fabs(est.value - tail) < std::max(6.0 * est.std_error, 0.01));
    // Response mean is 1/(mu - lambda) = 2.
    CHECK(std::fabs(result.mean_response() - 2.0) < 0.08);
  }

  TEST_CASE("zero service keeps everything at zero") {
    SimulationConfig cfg = base_config(
        FJSystem::homogeneous(2, Distribution::deterministic(0.0), Distribution::exponential(1.0)),
        Strategy::deterministic(2, 2));
    cfg.n_jobs = 5000;
    SimulationResult result = simulate(cfg);
    CHECK(result.mean_waiting() == 0.0);
    CHECK(result.mean_response() == 0.0);
  }

  TEST_CASE("constant under-loaded system never queues") {
    SimulationConfig cfg = base_config(
        FJSystem::homogeneous(2, Distribution::deterministic(0.5), Distribution::deterministic(1.0)),
        Strategy::deterministic(2, 2));
    cfg.n_jobs = 5000;
    SimulationResult result = simulate(cfg);
    CHECK(result.mean_waiting() == 0.0);
    CHECK(result.mean_response() == doctest::Approx(0.5));
    CHECK(result.waiting_percentile(0.999) == 0.0);
    CHECK(result.response_percentile(0.5) == doctest::Approx(0.5));
  }

  TEST_CASE("response dominates waiting by at most the largest task") {
    SimulationConfig cfg = base_config(
        FJSystem::homogeneous(2, Distribution::deterministic(0.7), Distribution::exponential(0.5)),
        Strategy::deterministic(2, 2));
    cfg.n_jobs = 20000;
    cfg.seed = 5;
    SimulationResult result = simulate(cfg);
    for (const StratumSamples& s : result.strata()) {
      for (std::size_t i = 0; i < s.waiting.size(); ++i) {
        CHECK(s.response[i] >= s.waiting[i]);
        CHECK(s.response[i] <= s.waiting[i] + 0.7 + 1e-12);
      }
    }
  }

  TEST_CASE("removing servers never increases waiting, path by path") {
    // Same seed: the two-server run shares its arrival and service
    // streams with the first two servers of the three-server run.
    auto run = [](int n) {
      SimulationConfig cfg = base_config(
          FJSystem::homogeneous(n, Distribution::exponential(1.0), Distribution::exponential(0.4)),
          Strategy::deterministic(n, n));
      cfg.n_jobs = 30000;
      cfg.seed = 77;
      return simulate(cfg);
    };
    SimulationResult three = run(3);
    SimulationResult two = run(2);
    const std::vector<double>& w3 = three.strata().front().waiting;
    const std::vector<double>& w2 = two.strata().front().waiting;
    REQUIRE(w3.size() == w2.size());
    for (std::size_t i = 0; i < w3.size(); ++i) {
      CHECK(w2[i] <= w3[i] + 1e-12);
    }
  }

  TEST_CASE("seeds are reproducible and thread counts never matter") {
    SimulationConfig cfg = base_config(
        FJSystem::homogeneous(3, Distribution::exponential(1.1), Distribution::exponential(0.4), 1.0),
        Strategy::binomial(3, 0.6));
    cfg.n_jobs = 15000;
    cfg.replications = 6;
    cfg.seed = 31;
    cfg.threads = 1;
    SimulationResult a = simulate(cfg);
    cfg.threads = 8;
    SimulationResult b = simulate(cfg);
    REQUIRE(a.strata().size() == b.strata().size());
    for (std::size_t s = 0; s < a.strata().size(); ++s) {
      CHECK(a.strata()[s].waiting == b.strata()[s].waiting);
      CHECK(a.strata()[s].response == b.strata()[s].response);
      CHECK(a.strata()[s].rep_ranges == b.strata()[s].rep_ranges);
    }
    cfg.seed = 32;
    SimulationResult c = simulate(cfg);
    CHECK(a.strata().front().waiting != c.strata().front().waiting);
  }

  TEST_CASE("strata carry the strategy pmf as weights") {
    Strategy st = Strategy::binomial(4, 0.7);
    SimulationConfig cfg = base_config(
        FJSystem::homogeneous(4, Distribution::exponential(1.0), Distribution::exponential(0.3), 1.0), st);
    cfg.n_jobs = 2000;
    SimulationResult result = simulate(cfg);
    REQUIRE(result.strata().size() == 4);
    for (int s = 1; s <= 4; ++s) {
      CHECK(result.strata()[static_cast<std::size_t>(s - 1)].servers == s);
      CHECK(result.strata()[static_cast<std::size_t>(s - 1)].weight == doctest::Approx(st.pmf(s)));
    }
    Strategy masked = Strategy::explicit_pmf({0.5, 0.0, 0.0, 0.5});
    cfg.strategy = masked;
    SimulationResult sparse = simulate(cfg);
    REQUIRE(sparse.strata().size() == 2);
    CHECK(sparse.strata()[0].servers == 1);
    CHECK(sparse.strata()[1].servers == 4);
  }

  TEST_CASE("per-job mode pools everything into one mixed stratum") {
    SimulationConfig cfg = base_config(
        FJSystem::homogeneous(3, Distribution::exponential(1.2), Distribution::exponential(0.4), 1.0),
        Strategy::binomial(3, 0.5));
    cfg.strategy_mode = StrategyMode::per_job;
    cfg.n_jobs = 20000;
    SimulationResult result = simulate(cfg);
    REQUIRE(result.strata().size() == 1);
    CHECK(result.strata().front().servers == 0);
    CHECK(result.strata().front().weight == 1.0);
    CHECK(result.mean_waiting() >= 0.0);
    CHECK(result.mean_response() > 0.0);
  }

  TEST_CASE("independent seeds agree within sampling error") {
    auto run = [](std::uint64_t seed) {
      SimulationConfig cfg = base_config(
          FJSystem::homogeneous(3, Distribution::exponential(1.1), Distribution::exponential(0.4), 1.0),
          Strategy::binomial(3, 0.6));
      cfg.n_jobs = 120000;
      cfg.replications = 4;
      cfg.threads = 4;
      cfg.seed = seed;
      return simulate(cfg);
    };
    SimulationResult a = run(101);
    SimulationResult b = run(909);
    double sigma = 0.5;
    CcdfEstimate ea = a.waiting_ccdf_batch(sigma);
    CcdfEstimate eb = b.waiting_ccdf_batch(sigma);
    double se = std::sqrt(ea.std_error * ea.std_error + eb.std_error * eb.std_error);
    CHECK(std::fabs(ea.value - eb.value) < 5.0 * se + 1e-4);
  }

  TEST_CASE("unstable runs are capped and flagged") {
    SimulationConfig cfg = base_config(
        FJSystem::homogeneous(1, Distribution::exponential(0.9), Distribution::exponential(1.0)),
        Strategy::deterministic(1, 1));
    cfg.n_jobs = 150000;
    SimulationResult result = simulate(cfg);
    CHECK(result.horizon_capped());
    // Horizon capped at 100000 with the default warmup of 15000.
    CHECK(result.total_samples() == 85000);
  }

  TEST_CASE("default warmup arithmetic") {
    SimulationConfig cfg = base_config(
        FJSystem::homogeneous(1, Distribution::exponential(2.0), Distribution::exponential(0.5)),
        Strategy::deterministic(1, 1));
    cfg.n_jobs = 5000;  // warmup floors at 1000
    CHECK(simulate(cfg).total_samples() == 4000);
    cfg.n_jobs = 20000;  // 10% rule
    CHECK(simulate(cfg).total_samples() == 18000);
    cfg.warmup = 19999;
    CHECK(simulate(cfg).total_samples() == 1);
    cfg.warmup = 20000;
    CHECK_THROWS_AS(simulate(cfg), ConfigError);
  }

  TEST_CASE("hierarchical rate redraws differ across replications") {
    SimulationConfig cfg = base_config(
        FJSystem::homogeneous(2, Distribution::exponential(1.0), Distribution::exponential(0.8), 1.0),
        Strategy::deterministic(2, 2));
    cfg.rate_model = TwoClassModel(1.5, 3.0, 0.5);
    cfg.n_jobs = 8000;
    cfg.replications = 3;
    SimulationResult result = simulate(cfg);
    const StratumSamples& s = result.strata().front();
    REQUIRE(s.rep_ranges.size() == 3);
    auto [o0, l0] = s.rep_ranges[0];
    auto [o1, l1] = s.rep_ranges[1];
    REQUIRE(l0 > 0);
    REQUIRE(l1 > 0);
    std::vector<double> r0(s.waiting.begin() + static_cast<std::ptrdiff_t>(o0),
                           s.waiting.begin() + static_cast<std::ptrdiff_t>(o0 + l0));
    std::vector<double> r1(s.waiting.begin() + static_cast<std::ptrdiff_t>(o1),
                           s.waiting.begin() + static_cast<std::ptrdiff_t>(o1 + l1));
    CHECK(r0 != r1);
    CHECK(std::isfinite(result.mean_waiting()));

    cfg.rate_model = TruncatedExpModel(2.0, 0.8);
    CHECK(std::isfinite(simulate(cfg).mean_response()));
  }

  TEST_CASE("single-queue waiting percentile matches theory") {
    SimulationConfig cfg = base_config(
        FJSystem::homogeneous(1, Distribution::exponential(1.0), Distribution::exponential(0.5)),
        Strategy::deterministic(1, 1));
    cfg.n_jobs = 400000;
    cfg.replications = 2;
    cfg.threads = 2;
    cfg.seed = 1234;
    SimulationResult result = simulate(cfg);
    // P(W >= s) = 0.5 e^{-0.5 s}; the 99th percentile solves 0.5 e^{-0.5
    // s} = 0.01.
    double oracle = std::log(50.0) / 0.5;
    CHECK(std::fabs(result.waiting_percentile(0.99) - oracle) < 0.4);
  }

  TEST_CASE("configuration validation") {
    SimulationConfig cfg = base_config(
        FJSystem::homogeneous(2, Distribution::exponential(1.0), Distribution::exponential(0.5)),
        Strategy::deterministic(3, 3));
    CHECK_THROWS_AS(simulate(cfg), ConfigError);
    SimulationConfig bad_arrivals = base_config(
        FJSystem::homogeneous(2, Distribution::exponential(1.0), Distribution::uniform_interval(0.5, 1.5)),
        Strategy::deterministic(2, 2));
    bad_arrivals.rate_model = TwoClassModel(1.5, 3.0, 0.5);
    CHECK_THROWS_AS(simulate(bad_arrivals), ConfigError);
    SimulationConfig mismatch = base_config(
        FJSystem::homogeneous(2, Distribution::exponential(1.0), Distribution::exponential(0.5)),
        Strategy::deterministic(2, 2));
    mismatch.rate_model = TruncatedExpModel(2.0, 0.9);
    CHECK_THROWS_AS(simulate(mismatch), ConfigError);
  }

  TEST_CASE("log growth of high percentiles in the pool size") {
    std::vector<SimulationConfig> configs;
    for (int n : {2, 4, 8}) {
      SimulationConfig cfg = base_config(
          FJSystem::homogeneous(n, Distribution::exponential(1.0), Distribution::exponential(0.4)),
          Strategy::deterministic(n, n));
      cfg.n_jobs = 60000;
      cfg.seed = 4097;
      configs.push_back(cfg);
    }
    GrowthFit fit = percentile_growth_fit(configs, 0.99, GrowthAxis::log_pool_size);
    CHECK(fit.slope > 0.0);
    CHECK(fit.r_squared > 0.9);
    REQUIRE(fit.points.size() == 3);
  }
}
