#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "fjlab/errors.hpp"
#include "fjlab/rate_models.hpp"
#include "fjlab/rng.hpp"
#include "fjlab/strategies.hpp"
#include "fjlab/system.hpp"

namespace fjlab {

// per_run fixes the server count for a whole replication and stratifies
// replications by it, matching the conditioning device behind the
// strategy-averaged bounds. per_job redraws the count for every job;
// exploration only, no dominance guarantees are claimed for it.
enum class StrategyMode { per_run, per_job };

struct SimulationConfig {
  FJSystem system;
  Strategy strategy;
  StrategyMode strategy_mode = StrategyMode::per_run;
  // When set, each replication draws fresh exponential service rates for
  // the active servers from this model, overriding the system's service
  // distributions. Requires exponential arrivals.
  std::optional<HierarchicalModel> rate_model;
  std::int64_t n_jobs = 100'000;  // per replication, including warmup
  std::int64_t warmup = -1;       // negative: 10% of n_jobs, at least 1000, always below n_jobs
  int replications = 1;
  std::uint64_t seed = 1;
  int threads = 1;
};

struct CcdfEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct StratumSamples {
  int servers = 0;
  double weight = 1.0;
  std::vector<double> waiting;   // post-warmup samples in job order, replications concatenated
  std::vector<double> response;
  std::vector<std::pair<std::size_t, std::size_t>> rep_ranges;  // offset, length
  std::vector<double> waiting_sorted;
  std::vector<double> response_sorted;
};

class SimulationResult {
 public:
  const std::vector<StratumSamples>& strata() const noexcept { return strata_; }
  std::uint64_t seed() const noexcept { return seed_; }
  bool horizon_capped() const noexcept { return capped_; }
  std::size_t total_samples() const noexcept { return total_; }

  double mean_waiting() const { return mean(&StratumSamples::waiting); }
  double mean_response() const { return mean(&StratumSamples::response); }

  // Weighted nearest-rank quantile of the stationary mixture.
  double waiting_percentile(double q) const { return percentile(merged_waiting_, q); }
  double response_percentile(double q) const { return percentile(merged_response_, q); }

  // P(metric >= sigma) with the stratified binomial standard error.
  // Treats samples as iid and strata as independent; both are
  // approximations (queues mix slowly, strata share random numbers), so
  // prefer the batch variant below whenever replications >= 2.
  CcdfEstimate waiting_ccdf(double sigma) const { return ccdf(&StratumSamples::waiting_sorted, sigma); }
  CcdfEstimate response_ccdf(double sigma) const { return ccdf(&StratumSamples::response_sorted, sigma); }

  // Same estimate, standard error taken across replications instead.
  // Honest when samples are autocorrelated or rates are redrawn per
  // replication; needs at least two replications, else falls back to the
  // binomial error.
  CcdfEstimate waiting_ccdf_batch(double sigma) const {
    return ccdf_batch(&StratumSamples::waiting, &StratumSamples::waiting_sorted, sigma);
  }
  CcdfEstimate response_ccdf_batch(double sigma) const {
    return ccdf_batch(&StratumSamples::response, &StratumSamples::response_sorted, sigma);
  }

 private:
  friend SimulationResult simulate(const SimulationConfig&);

  void finalize() {
    total_ = 0;
    for (StratumSamples& s : strata_) {
      total_ += s.waiting.size();
      s.waiting_sorted = s.waiting;
      s.response_sorted = s.response;
      std::sort(s.waiting_sorted.begin(), s.waiting_sorted.end());
      std::sort(s.response_sorted.begin(), s.response_sorted.end());
    }
    build_merged(&StratumSamples::waiting_sorted, merged_waiting_);
    build_merged(&StratumSamples::response_sorted, merged_response_);
  }

  void build_merged(std::vector<double> StratumSamples::* member, std::vector<std::pair<double, double>>& out) {
    out.clear();
    for (const StratumSamples& s : strata_) {
      const std::vector<double>& v = s.*member;
      if (v.empty()) continue;
      double w = s.weight / static_cast<double>(v.size());
      for (double x : v) out.emplace_back(x, w);
    }
    std::sort(out.begin(), out.end());
  }

  double mean(std::vector<double> StratumSamples::* member) const {
    require_samples();
    double total = 0.0;
    for (const StratumSamples& s : strata_) {
      const std::vector<double>& v = s.*member;
      if (v.empty()) continue;
      double acc = 0.0;
      for (double x : v) acc += x;
      total += s.weight * acc / static_cast<double>(v.size());
    }
    return total;
  }

  double percentile(const std::vector<std::pair<double, double>>& merged, double q) const {
    require_samples();
    if (!(q > 0.0 && q < 1.0)) throw RangeError("percentile level must lie in (0,1), got " + std::to_string(q));
    double total = 0.0;
    for (const auto& [value, weight] : merged) total += weight;
    double target = q * total;
    double cum = 0.0;
    for (const auto& [value, weight] : merged) {
      cum += weight;
      if (cum >= target - 1e-12 * total) return value;
    }
    return merged.back().first;
  }

  CcdfEstimate ccdf(std::vector<double> StratumSamples::* member, double sigma) const {
    require_samples();
    double estimate = 0.0;
    double variance = 0.0;
    for (const StratumSamples& s : strata_) {
      const std::vector<double>& sorted = s.*member;
      if (sorted.empty()) continue;
      double n = static_cast<double>(sorted.size());
      auto it = std::lower_bound(sorted.begin(), sorted.end(), sigma);
      double p = static_cast<double>(sorted.end() - it) / n;
      estimate += s.weight * p;
      variance += s.weight * s.weight * p * (1.0 - p) / n;
    }
    return {estimate, std::sqrt(variance)};
  }

  CcdfEstimate ccdf_batch(std::vector<double> StratumSamples::* member,
                          std::vector<double> StratumSamples::* sorted_member, double sigma) const {
    CcdfEstimate pooled = ccdf(sorted_member, sigma);
    std::size_t reps = strata_.empty() ? 0 : strata_.front().rep_ranges.size();
    for (const StratumSamples& s : strata_) reps = std::min(reps, s.rep_ranges.size());
    if (reps < 2) return pooled;
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      double mix = 0.0;
      for (const StratumSamples& s : strata_) {
        auto [offset, length] = s.rep_ranges[r];
        if (length == 0) continue;
        const std::vector<double>& v = s.*member;
        std::size_t count = 0;
        for (std::size_t i = offset; i < offset + length; ++i) count += v[i] >= sigma;
        mix += s.weight * static_cast<double>(count) / static_cast<double>(length);
      }
      sum += mix;
      sum_sq += mix * mix;
    }
    double r = static_cast<double>(reps);
    double var = std::max(0.0, (sum_sq - sum * sum / r) / (r - 1.0)) / r;
    return {pooled.value, std::sqrt(var)};
  }

  void require_samples() const {
    if (strata_.empty()) throw EmptyError("simulation produced no samples");
    for (const StratumSamples& s : strata_) {
      if (!s.waiting.empty()) return;
    }
    throw EmptyError("simulation produced no post-warmup samples");
  }

  std::vector<StratumSamples> strata_;
  std::vector<std::pair<double, double>> merged_waiting_;
  std::vector<std::pair<double, double>> merged_response_;
  std::uint64_t seed_ = 0;
  bool capped_ = false;
  std::size_t total_ = 0;
};

namespace detail {

constexpr std::int64_t kUnstableHorizonCap = 100'000;

constexpr std::uint64_t kStreamArrival = 0xA1;
constexpr std::uint64_t kStreamServer = 0x5E;
constexpr std::uint64_t kStreamRates = 0x77;
constexpr std::uint64_t kStreamCounts = 0xC0;

struct RepOutput {
  std::vector<double> waiting;
  std::vector<double> response;
  bool capped = false;
};

inline std::int64_t resolve_warmup(std::int64_t n_jobs, std::int64_t warmup) {
  if (warmup >= 0) {
    if (warmup >= n_jobs) throw ConfigError("warmup must be smaller than n_jobs");
    return warmup;
  }
  std::int64_t w = std::max<std::int64_t>(n_jobs / 10, 1000);
  return std::min(w, n_jobs - 1);
}

inline RepOutput run_replication(const SimulationConfig& cfg, int stratum_servers, int replication,
                                 std::int64_t warmup) {
  const FJSystem& system = cfg.system;
  const int pool = cfg.strategy.pool_size();
  const bool per_job = cfg.strategy_mode == StrategyMode::per_job;
  const double phi = system.scaling_exponent();
  // Streams are keyed on the replication and server only, never on the
  // stratum: strata of one replication share arrivals and per-server
  // service draws, so the run on s servers sees a prefix of the run on
  // s+1 and runs with different strategies couple path by path. Each
  // stratum stays a faithful conditional simulation; only cross-stratum
  // independence is given up, which the replication-batch errors cover.
  const std::uint64_t ri = static_cast<std::uint64_t>(replication);

  Rng arrival_rng = Rng::substream(cfg.seed, {kStreamArrival, ri});
  Rng count_rng = Rng::substream(cfg.seed, {kStreamCounts, ri});
  std::vector<Rng> server_rng;
  server_rng.reserve(static_cast<std::size_t>(pool));
  for (int n = 0; n < pool; ++n) {
    server_rng.push_back(Rng::substream(cfg.seed, {kStreamServer, ri, static_cast<std::uint64_t>(n)}));
  }

  // Service law per server for this replication; a hierarchical model
  // redraws all of them here, once, for the whole pool.
  std::vector<Distribution> service;
  service.reserve(static_cast<std::size_t>(pool));
  if (cfg.rate_model) {
    Rng rate_rng = Rng::substream(cfg.seed, {kStreamRates, ri});
    for (int n = 0; n < pool; ++n) {
      service.push_back(Distribution::exponential(sample_rate(*cfg.rate_model, rate_rng)));
    }
  } else {
    for (int n = 0; n < pool; ++n) service.push_back(system.servers()[static_cast<std::size_t>(n)].service);
  }

  // Worst-case conditional load decides whether the horizon gets capped;
  // a server's mean work per arrival is pi times its mean task.
  const int slowest_count = per_job ? cfg.strategy.min_support() : stratum_servers;
  double worst_mean = 0.0;
  for (int n = 0; n < (per_job ? pool : stratum_servers); ++n) {
    const std::size_t idx = static_cast<std::size_t>(n);
    worst_mean = std::max(worst_mean, system.servers()[idx].select_probability * service[idx].mean());
  }
  const double divisor = std::pow(static_cast<double>(slowest_count), phi);
  const bool stable = worst_mean / divisor < system.arrival().mean();

  std::int64_t horizon = cfg.n_jobs;
  if (!stable) horizon = std::min(horizon, kUnstableHorizonCap);
  std::int64_t effective_warmup = std::min(warmup, horizon - 1);

  std::vector<double> speedup(static_cast<std::size_t>(pool) + 1, 1.0);
  for (int s = 1; s <= pool; ++s) speedup[static_cast<std::size_t>(s)] = std::pow(static_cast<double>(s), phi);

  std::vector<double> backlog(static_cast<std::size_t>(pool), 0.0);
  std::vector<double> task(static_cast<std::size_t>(pool), 0.0);

  RepOutput out;
  out.capped = !stable;
  out.waiting.reserve(static_cast<std::size_t>(horizon - effective_warmup));
  out.response.reserve(static_cast<std::size_t>(horizon - effective_warmup));

  for (std::int64_t j = 0; j < horizon; ++j) {
    const int active = per_job ? cfg.strategy.sample(count_rng) : stratum_servers;
    const double scale = speedup[static_cast<std::size_t>(active)];
    double wait = 0.0;
    double resp = 0.0;
    for (int n = 0; n < active; ++n) {
      const std::size_t idx = static_cast<std::size_t>(n);
      double x = service[idx].sample(server_rng[idx]);
      double u = server_rng[idx].next_unit();
      double contribution =
          u < system.servers()[idx].select_probability ? x / scale : 0.0;
      task[idx] = contribution;
      wait = std::max(wait, backlog[idx]);
      resp = std::max(resp, backlog[idx] + contribution);
    }
    double gap = system.arrival().sample(arrival_rng);
    if (j >= effective_warmup) {
      out.waiting.push_back(wait);
      out.response.push_back(resp);
    }
    for (int n = 0; n < active; ++n) {
      const std::size_t idx = static_cast<std::size_t>(n);
      backlog[idx] = std::max(0.0, backlog[idx] + task[idx] - gap);
    }
    if (per_job) {
      for (int n = active; n < pool; ++n) {
        const std::size_t idx = static_cast<std::size_t>(n);
        backlog[idx] = std::max(0.0, backlog[idx] - gap);
      }
    }
  }
  return out;
}

template <class Fn>
inline void parallel_tasks(int threads, std::size_t count, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      fn(i);
    }
  };
  std::vector<std::thread> pool;
  int n = std::min<int>(threads, static_cast<int>(count));
  pool.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
}

}  // namespace detail

inline SimulationResult simulate(const SimulationConfig& cfg) {
  if (cfg.n_jobs < 1) throw ConfigError("n_jobs must be >= 1");
  if (cfg.replications < 1) throw ConfigError("replications must be >= 1");
  if (cfg.strategy.pool_size() != cfg.system.server_count()) {
    throw ConfigError("strategy pool size " + std::to_string(cfg.strategy.pool_size()) +
                      " does not match server count " + std::to_string(cfg.system.server_count()));
  }
  if (cfg.rate_model) {
    if (cfg.system.arrival().kind() != DistKind::exponential) {
      throw ConfigError("hierarchical rate models require exponential arrivals");
    }
    if (const auto* trunc = std::get_if<TruncatedExpModel>(&*cfg.rate_model)) {
      if (std::fabs(trunc->arrival_rate() - cfg.system.arrival().rate()) > 1e-12) {
        throw ConfigError("hierarchical truncation point disagrees with the arrival rate");
      }
    }
  }
  const std::int64_t warmup = detail::resolve_warmup(cfg.n_jobs, cfg.warmup);

  SimulationResult result;
  result.seed_ = cfg.seed;

  struct TaskRef {
    int stratum;
    int servers;
    int replication;
  };
  std::vector<TaskRef> tasks;

  if (cfg.strategy_mode == StrategyMode::per_job) {
    StratumSamples stratum;
    stratum.servers = 0;  // mixed
    stratum.weight = 1.0;
    result.strata_.push_back(std::move(stratum));
    for (int r = 0; r < cfg.replications; ++r) tasks.push_back({0, 0, r});
  } else {
    for (int s = 1; s <= cfg.strategy.pool_size(); ++s) {
      double w = cfg.strategy.masses()[static_cast<std::size_t>(s - 1)];
      if (w == 0.0) continue;
      StratumSamples stratum;
      stratum.servers = s;
      stratum.weight = w;
      int index = static_cast<int>(result.strata_.size());
      result.strata_.push_back(std::move(stratum));
      for (int r = 0; r < cfg.replications; ++r) tasks.push_back({index, s, r});
    }
  }

  std::vector<detail::RepOutput> outputs(tasks.size());
  detail::parallel_tasks(cfg.threads, tasks.size(), [&](std::size_t i) {
    const TaskRef& t = tasks[i];
    outputs[i] = detail::run_replication(cfg, t.servers, t.replication, warmup);
  });

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    StratumSamples& stratum = result.strata_[static_cast<std::size_t>(tasks[i].stratum)];
    detail::RepOutput& rep = outputs[i];
    result.capped_ = result.capped_ || rep.capped;
    stratum.rep_ranges.emplace_back(stratum.waiting.size(), rep.waiting.size());
    stratum.waiting.insert(stratum.waiting.end(), rep.waiting.begin(), rep.waiting.end());
    stratum.response.insert(stratum.response.end(), rep.response.begin(), rep.response.end());
  }
  result.finalize();
  return result;
}

inline CcdfEstimate empirical_ccdf(const SimulationResult& result, double sigma) {
  return result.waiting_ccdf(sigma);
}

// Least-squares fit of a high waiting-time percentile against the log of
// the pool size (or of the mean busy-server count), quantifying the
// logarithmic growth of fork-join tails.
enum class GrowthAxis { log_pool_size, log_expected_servers };

struct GrowthFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;
};

inline GrowthFit percentile_growth_fit(const std::vector<SimulationConfig>& configs, double percentile = 0.999,
                                       GrowthAxis axis = GrowthAxis::log_pool_size) {
  if (configs.size() < 2) throw RangeError("growth fit needs at least two configurations");
  GrowthFit fit;
  for (const SimulationConfig& cfg : configs) {
    SimulationResult result = simulate(cfg);
    double x = axis == GrowthAxis::log_pool_size ? std::log(static_cast<double>(cfg.strategy.pool_size()))
                                                 : std::log(cfg.strategy.expected_servers());
    fit.points.emplace_back(x, result.waiting_percentile(percentile));
  }
  double n = static_cast<double>(fit.points.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (auto [x, y] : fit.points) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw RangeError("growth fit needs at least two distinct x values");
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0;
  double mean_y = sy / n;
  double ss_tot = 0.0;
  for (auto [x, y] : fit.points) {
    double e = y - (fit.intercept + fit.slope * x);
    ss_res += e * e;
    ss_tot += (y - mean_y) * (y - mean_y);
  }
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace fjlab
