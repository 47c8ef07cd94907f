#pragma once

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "fjlab/bounds.hpp"
#include "fjlab/config.hpp"
#include "fjlab/errors.hpp"
#include "fjlab/io.hpp"
#include "fjlab/optimizer.hpp"
#include "fjlab/simulator.hpp"
#include "fjlab/strategies.hpp"
#include "fjlab/system.hpp"

namespace fjlab::cli {

namespace fs = std::filesystem;

// Command-line overrides. out_dir only moves files, so it is not part of
// the echoed config or its hash; seed changes results and is.
struct RunOptions {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  int threads = 0;  // <= 0: FJLAB_THREADS, then hardware concurrency
};

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("FJLAB_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (!in) throw IoError("read failure on " + path.string());
  return ss.str();
}

namespace detail {

inline std::string fd(double v) { return io::format_double(v); }

// Compact form for labels (column names, statistic names).
inline std::string label_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

struct Prepared {
  ExperimentConfig cfg;
  fs::path out;
  std::string hash_hex;
  std::vector<std::string> metadata;
  std::vector<fs::path> files;
};

inline Prepared prepare(const char* command, ExperimentConfig cfg, const RunOptions& opts) {
  if (opts.seed) cfg.seed = *opts.seed;
  fs::path out = opts.out_dir ? fs::path(*opts.out_dir) : fs::path(cfg.out_dir);
  io::ensure_directory(out);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
  Prepared p{std::move(cfg), out, buf, {}, {}};
  p.metadata = {std::string("command: ") + command, "config_hash: " + p.hash_hex,
                "seed: " + std::to_string(p.cfg.seed)};
  fs::path echo = p.out / "config_echo.json";
  io::write_text_file(echo, to_json(p.cfg).dump(2) + "\n");
  p.files.push_back(echo);
  return p;
}

inline std::vector<std::string> detect_families(const ExperimentConfig& cfg) {
  if (!cfg.families.empty()) return cfg.families;
  if (cfg.rate_model) return {"hierarchical"};
  if (cfg.strategy) return {"scaled"};
  return {"general"};
}

inline const FJSystem& require_system(const ExperimentConfig& cfg, const char* who) {
  if (!cfg.system) throw ConfigError(std::string(who) + ": needs a \"system\"");
  return *cfg.system;
}

// A missing strategy means the plain fork-join discipline: every job
// forks to the whole pool.
inline Strategy effective_strategy(const ExperimentConfig& cfg, const char* who) {
  if (cfg.strategy) return *cfg.strategy;
  const FJSystem& sys = require_system(cfg, who);
  return Strategy::deterministic(sys.server_count(), sys.server_count());
}

struct ScaledParams {
  int pool = 0;
  double service_rate = 0.0;
  double arrival_rate = 0.0;
  double phi = 0.0;
};

inline ScaledParams extract_scaled(const ExperimentConfig& cfg, const char* who) {
  const FJSystem& sys = require_system(cfg, who);
  if (sys.arrival().kind() != DistKind::exponential) {
    throw ConfigError(std::string(who) + ": needs exponential arrivals");
  }
  const Distribution& first = sys.servers().front().service;
  if (first.kind() != DistKind::exponential) {
    throw ConfigError(std::string(who) + ": needs exponential service times");
  }
  for (const ServerSpec& s : sys.servers()) {
    if (!(s.service == first) || s.select_probability != 1.0) {
      throw ConfigError(std::string(who) + ": needs identical exponential servers, all with pi = 1");
    }
  }
  return {sys.server_count(), first.rate(), sys.arrival().rate(), sys.scaling_exponent()};
}

inline std::vector<TailBoundCurve> family_curves(const ExperimentConfig& cfg, const std::string& family) {
  if (family == "general") {
    return general_curves(require_system(cfg, "bound family \"general\""));
  }
  if (family == "scaled") {
    ScaledParams sp = extract_scaled(cfg, "bound family \"scaled\"");
    return scaled_curves(sp.service_rate, sp.arrival_rate, effective_strategy(cfg, "bound family \"scaled\""),
                         sp.phi);
  }
  if (!cfg.rate_model) throw ConfigError("bound family \"hierarchical\": needs a \"rate_model\"");
  const FJSystem& sys = require_system(cfg, "bound family \"hierarchical\"");
  if (sys.arrival().kind() != DistKind::exponential) {
    throw ConfigError("bound family \"hierarchical\": needs exponential arrivals");
  }
  return hierarchical_curves(effective_strategy(cfg, "bound family \"hierarchical\""), *cfg.rate_model,
                             sys.arrival().rate(), sys.scaling_exponent());
}

inline std::pair<std::string, std::string> split_curve_id(const std::string& id) {
  std::size_t dash = id.rfind('-');
  return {id.substr(0, dash), id.substr(dash + 1)};
}

inline std::vector<double> targets_or_default(const ExperimentConfig& cfg) {
  if (!cfg.percentile_targets.empty()) return cfg.percentile_targets;
  return {0.5, 0.99, 0.999};
}

inline SimulationConfig build_simulation(const ExperimentConfig& cfg, const Strategy& strategy,
                                         const FJSystem& system, int threads) {
  SimulationSettings s = cfg.simulation ? *cfg.simulation : SimulationSettings{};
  SimulationConfig sim{system,  strategy,       s.strategy_mode, cfg.rate_model, s.n_jobs,
                       s.warmup, s.replications, cfg.seed,        resolve_threads(threads)};
  return sim;
}

inline void write_samples_file(const fs::path& path, const SimulationResult& result) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  auto put = [&](const void* p, std::size_t n) { out.write(reinterpret_cast<const char*>(p), n); };
  put("FJSAMP01", 8);
  std::uint32_t count = static_cast<std::uint32_t>(result.strata().size());
  put(&count, sizeof(count));
  for (const StratumSamples& s : result.strata()) {
    std::int32_t servers = s.servers;
    double weight = s.weight;
    std::uint64_t n = s.waiting.size();
    put(&servers, sizeof(servers));
    put(&weight, sizeof(weight));
    put(&n, sizeof(n));
    put(s.waiting.data(), n * sizeof(double));
    put(s.response.data(), n * sizeof(double));
  }
  if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// bound: evaluate the configured bound families on a threshold grid and
// invert them at tail-probability targets.
// ---------------------------------------------------------------------------

inline std::vector<fs::path> cmd_bound(ExperimentConfig config, const RunOptions& opts = {}) {
  detail::Prepared p = detail::prepare("bound", std::move(config), opts);
  const ExperimentConfig& cfg = p.cfg;
  if (!cfg.sigma_grid && cfg.percentile_targets.empty()) {
    throw ConfigError("bound: needs \"sigma_grid\" or \"percentile_targets\"");
  }
  struct NamedCurve {
    std::string family;
    std::string kind;
    TailBoundCurve curve;
  };
  std::vector<NamedCurve> curves;
  for (const std::string& family : detail::detect_families(cfg)) {
    for (TailBoundCurve& c : detail::family_curves(cfg, family)) {
      auto [fam, kind] = detail::split_curve_id(c.id);
      curves.push_back({fam, kind, std::move(c)});
    }
  }
  if (cfg.sigma_grid) {
    fs::path path = p.out / "bounds.csv";
    io::CsvWriter csv(path, p.metadata, {"family", "kind", "sigma", "bound", "decay_rate"});
    for (const NamedCurve& c : curves) {
      for (double sigma : cfg.sigma_grid->materialize()) {
        csv.write_row({c.family, c.kind, detail::fd(sigma), detail::fd(c.curve.value(sigma)),
                       detail::fd(c.curve.decay_rate)});
      }
    }
    csv.close();
    p.files.push_back(path);
  }
  if (!cfg.percentile_targets.empty()) {
    fs::path path = p.out / "percentiles.csv";
    io::CsvWriter csv(path, p.metadata, {"family", "kind", "tail_probability", "sigma"});
    for (const NamedCurve& c : curves) {
      for (double eps : cfg.percentile_targets) {
        csv.write_row({c.family, c.kind, detail::fd(eps), detail::fd(invert_bound(c.curve.value, eps))});
      }
    }
    csv.close();
    p.files.push_back(path);
  }
  return p.files;
}

// ---------------------------------------------------------------------------
// simulate: run the configured system and write summary statistics,
// per-stratum means, an optional empirical tail table and optional raw
// samples.
// ---------------------------------------------------------------------------

inline std::vector<fs::path> cmd_simulate(ExperimentConfig config, const RunOptions& opts = {}) {
  detail::Prepared p = detail::prepare("simulate", std::move(config), opts);
  const ExperimentConfig& cfg = p.cfg;
  const FJSystem& sys = detail::require_system(cfg, "simulate");
  Strategy strategy = detail::effective_strategy(cfg, "simulate");
  SimulationResult result = simulate(detail::build_simulation(cfg, strategy, sys, opts.threads));

  {
    fs::path path = p.out / "summary.csv";
    io::CsvWriter csv(path, p.metadata, {"statistic", "value"});
    csv.write_row({"total_samples", std::to_string(result.total_samples())});
    csv.write_row({"horizon_capped", result.horizon_capped() ? "1" : "0"});
    csv.write_row({"mean_waiting", detail::fd(result.mean_waiting())});
    csv.write_row({"mean_response", detail::fd(result.mean_response())});
    for (double q : detail::targets_or_default(cfg)) {
      csv.write_row({"waiting_p" + detail::label_double(q), detail::fd(result.waiting_percentile(q))});
      csv.write_row({"response_p" + detail::label_double(q), detail::fd(result.response_percentile(q))});
    }
    csv.close();
    p.files.push_back(path);
  }
  {
    fs::path path = p.out / "strata.csv";
    io::CsvWriter csv(path, p.metadata, {"servers", "weight", "samples", "mean_waiting", "mean_response"});
    for (const StratumSamples& s : result.strata()) {
      double mw = 0.0, mr = 0.0;
      for (double x : s.waiting) mw += x;
      for (double x : s.response) mr += x;
      double n = s.waiting.empty() ? 1.0 : static_cast<double>(s.waiting.size());
      csv.write_row({std::to_string(s.servers), detail::fd(s.weight), std::to_string(s.waiting.size()),
                     detail::fd(mw / n), detail::fd(mr / n)});
    }
    csv.close();
    p.files.push_back(path);
  }
  if (cfg.sigma_grid) {
    fs::path path = p.out / "ccdf.csv";
    io::CsvWriter csv(path, p.metadata,
                      {"sigma", "waiting_ccdf", "waiting_se", "waiting_se_batch", "response_ccdf", "response_se",
                       "response_se_batch"});
    for (double sigma : cfg.sigma_grid->materialize()) {
      CcdfEstimate w = result.waiting_ccdf(sigma);
      CcdfEstimate wb = result.waiting_ccdf_batch(sigma);
      CcdfEstimate r = result.response_ccdf(sigma);
      CcdfEstimate rb = result.response_ccdf_batch(sigma);
      csv.write_row({detail::fd(sigma), detail::fd(w.value), detail::fd(w.std_error), detail::fd(wb.std_error),
                     detail::fd(r.value), detail::fd(r.std_error), detail::fd(rb.std_error)});
    }
    csv.close();
    p.files.push_back(path);
  }
  if (cfg.simulation && cfg.simulation->dump_samples) {
    fs::path path = p.out / "samples.bin";
    detail::write_samples_file(path, result);
    p.files.push_back(path);
  }
  return p.files;
}

// ---------------------------------------------------------------------------
// optimize: pick a scheduling strategy against the bound objective.
// ---------------------------------------------------------------------------

inline std::vector<fs::path> cmd_optimize(ExperimentConfig config, const RunOptions& opts = {}) {
  detail::Prepared p = detail::prepare("optimize", std::move(config), opts);
  const ExperimentConfig& cfg = p.cfg;
  if (!cfg.optimize) throw ConfigError("optimize: needs an \"optimize\" block");
  const OptimizeSettings& opt = *cfg.optimize;

  json out{{"command", "optimize"},
           {"config_hash", p.hash_hex},
           {"seed", cfg.seed},
           {"objective", opt.objective == BoundObjective::waiting ? "waiting" : "response"}};

  if (opt.mode == OptimizeMode::budget) {
    const FJSystem& sys = detail::require_system(cfg, "optimize (budget mode)");
    BudgetOptimum best = optimize_budget(sys.server_count(), *opt.budget);
    out["mode"] = "budget";
    out["pool"] = sys.server_count();
    out["result"] = {{"budget", *opt.budget},
                     {"p", best.p},
                     {"expected_servers", best.expected_servers},
                     {"strategy", cfg_detail::strategy_to_json(best.strategy)}};
  } else {
    detail::ScaledParams sp = detail::extract_scaled(cfg, "optimize");
    double sigma;
    if (opt.sigma) {
      sigma = *opt.sigma;
    } else {
      // Tail target given instead of a threshold: place the threshold
      // where the no-parallelism reference (always one server) meets it.
      Strategy one = Strategy::deterministic(1, sp.pool);
      auto reference = [&](double s) {
        return opt.objective == BoundObjective::waiting
                   ? scaled_waiting_bound(sp.service_rate, sp.arrival_rate, one, sp.phi, s)
                   : scaled_response_bound(sp.service_rate, sp.arrival_rate, one, sp.phi, s);
      };
      sigma = invert_bound(reference, *opt.tail_probability);
      out["tail_probability"] = *opt.tail_probability;
    }
    out["pool"] = sp.pool;
    out["sigma"] = sigma;
    if (opt.mode == OptimizeMode::binomial_p) {
      BinomialOptimum best = optimize_binomial_p(sp.pool, sp.service_rate, sp.arrival_rate, sp.phi, sigma,
                                                 opt.grid_resolution, opt.objective);
      out["mode"] = "binomial_p";
      out["result"] = {{"p", best.p}, {"bound", best.value}, {"certified_boundary", best.certified_boundary}};
    } else {
      PmfOptimum best = optimize_pmf(sp.pool, sp.service_rate, sp.arrival_rate, sp.phi, sigma, opt.objective);
      out["mode"] = "pmf";
      out["result"] = {{"servers", best.servers},
                       {"bound", best.value},
                       {"strategy", cfg_detail::strategy_to_json(best.strategy)}};
    }
  }

  fs::path path = p.out / "optimize.json";
  io::write_text_file(path, out.dump(2) + "\n");
  p.files.push_back(path);
  return p.files;
}

// ---------------------------------------------------------------------------
// compare: evaluate bounds and the empirical tail on one grid, flagging
// each point with whether the simulation stayed below bound + 3 SE.
// ---------------------------------------------------------------------------

inline std::vector<fs::path> cmd_compare(ExperimentConfig config, const RunOptions& opts = {}) {
  detail::Prepared p = detail::prepare("compare", std::move(config), opts);
  const ExperimentConfig& cfg = p.cfg;
  if (!cfg.sigma_grid) throw ConfigError("compare: needs a \"sigma_grid\"");
  const FJSystem& sys = detail::require_system(cfg, "compare");
  Strategy strategy = detail::effective_strategy(cfg, "compare");

  struct NamedCurve {
    std::string family;
    std::string kind;
    TailBoundCurve curve;
  };
  std::vector<NamedCurve> curves;
  for (const std::string& family : detail::detect_families(cfg)) {
    for (TailBoundCurve& c : detail::family_curves(cfg, family)) {
      auto [fam, kind] = detail::split_curve_id(c.id);
      curves.push_back({fam, kind, std::move(c)});
    }
  }

  SimulationResult result = simulate(detail::build_simulation(cfg, strategy, sys, opts.threads));

  fs::path path = p.out / "compare.csv";
  io::CsvWriter csv(path, p.metadata,
                    {"family", "kind", "sigma", "bound", "ccdf", "std_error", "dominated"});
  for (const NamedCurve& c : curves) {
    for (double sigma : cfg.sigma_grid->materialize()) {
      double bound = c.curve.value(sigma);
      bool waiting = c.kind == "waiting";
      CcdfEstimate plain = waiting ? result.waiting_ccdf(sigma) : result.response_ccdf(sigma);
      CcdfEstimate batch = waiting ? result.waiting_ccdf_batch(sigma) : result.response_ccdf_batch(sigma);
      double se = std::max(plain.std_error, batch.std_error);
      bool dominated = plain.value <= bound + 3.0 * se;
      csv.write_row({c.family, c.kind, detail::fd(sigma), detail::fd(bound), detail::fd(plain.value),
                     detail::fd(se), dominated ? "1" : "0"});
    }
  }
  csv.close();
  p.files.push_back(path);
  return p.files;
}

// ---------------------------------------------------------------------------
// sweep: simulate over a parameter grid, or deterministic counts against
// budget-matched randomized strategies.
// ---------------------------------------------------------------------------

namespace detail {

struct SweepMetrics {
  double mean_waiting = 0.0;
  double mean_response = 0.0;
  std::vector<double> waiting_pcts;
  std::vector<double> response_pcts;
  bool capped = false;
};

inline SweepMetrics sweep_cell(const ExperimentConfig& cfg, const Strategy& strategy, const FJSystem& system,
                               const std::vector<double>& targets, int threads) {
  SimulationResult result = simulate(build_simulation(cfg, strategy, system, threads));
  SweepMetrics m;
  m.mean_waiting = result.mean_waiting();
  m.mean_response = result.mean_response();
  for (double q : targets) {
    m.waiting_pcts.push_back(result.waiting_percentile(q));
    m.response_pcts.push_back(result.response_percentile(q));
  }
  m.capped = result.horizon_capped();
  return m;
}

inline void append_metrics(std::vector<std::string>& row, const SweepMetrics& m) {
  row.push_back(fd(m.mean_waiting));
  row.push_back(fd(m.mean_response));
  for (double v : m.waiting_pcts) row.push_back(fd(v));
  for (double v : m.response_pcts) row.push_back(fd(v));
  row.push_back(m.capped ? "1" : "0");
}

inline std::vector<std::string> metric_columns(const std::vector<double>& targets) {
  std::vector<std::string> cols{"mean_waiting", "mean_response"};
  for (double q : targets) cols.push_back("waiting_p" + label_double(q));
  for (double q : targets) cols.push_back("response_p" + label_double(q));
  cols.push_back("capped");
  return cols;
}

}  // namespace detail

inline std::vector<fs::path> cmd_sweep(ExperimentConfig config, const RunOptions& opts = {}) {
  detail::Prepared p = detail::prepare("sweep", std::move(config), opts);
  const ExperimentConfig& cfg = p.cfg;
  if (!cfg.sweep) throw ConfigError("sweep: needs a \"sweep\" block");
  const FJSystem& sys = detail::require_system(cfg, "sweep");
  const std::vector<double> targets = detail::targets_or_default(cfg);
  fs::path path = p.out / "sweep.csv";

  if (cfg.sweep->kind == SweepKind::det_vs_stoch) {
    std::vector<std::string> header{"servers_target", "strategy", "p", "expected_servers"};
    for (const std::string& c : detail::metric_columns(targets)) header.push_back(c);
    io::CsvWriter csv(path, p.metadata, header);
    const int pool = sys.server_count();
    for (int s = 1; s <= pool; ++s) {
      Strategy det = Strategy::deterministic(s, pool);
      std::vector<std::string> row{std::to_string(s), "deterministic", "", detail::fd(static_cast<double>(s))};
      detail::append_metrics(row, detail::sweep_cell(cfg, det, sys, targets, opts.threads));
      csv.write_row(row);

      BudgetOptimum matched = optimize_budget(pool, static_cast<double>(s));
      std::vector<std::string> srow{std::to_string(s), "budget_matched", detail::fd(matched.p),
                                    detail::fd(matched.expected_servers)};
      detail::append_metrics(srow, detail::sweep_cell(cfg, matched.strategy, sys, targets, opts.threads));
      csv.write_row(srow);
    }
    csv.close();
    p.files.push_back(path);
    return p.files;
  }

  const SweepSettings& sw = *cfg.sweep;
  auto axis = [](const std::vector<double>& v) {
    std::vector<std::optional<double>> out;
    if (v.empty()) {
      out.push_back(std::nullopt);
    } else {
      for (double x : v) out.push_back(x);
    }
    return out;
  };
  std::vector<std::optional<double>> ps = axis(sw.p);
  std::vector<std::optional<double>> phis = axis(sw.phi);
  std::vector<std::optional<double>> pis = axis(sw.pi ? sw.pi->values : std::vector<double>{});
  if (sw.pi && sw.pi->server > sys.server_count()) {
    throw ConfigError("sweep.pi.server exceeds the system's server count");
  }

  std::vector<std::string> header{"p", "phi", "pi"};
  for (const std::string& c : detail::metric_columns(targets)) header.push_back(c);
  io::CsvWriter csv(path, p.metadata, header);
  for (const auto& pv : ps) {
    for (const auto& fv : phis) {
      for (const auto& piv : pis) {
        std::vector<ServerSpec> servers = sys.servers();
        if (piv) servers[static_cast<std::size_t>(sw.pi->server - 1)].select_probability = *piv;
        FJSystem cell_system(std::move(servers), sys.arrival(), fv ? *fv : sys.scaling_exponent());
        Strategy strategy =
            pv ? Strategy::binomial(cell_system.server_count(), *pv) : detail::effective_strategy(cfg, "sweep");
        std::vector<std::string> row{pv ? detail::fd(*pv) : "", detail::fd(cell_system.scaling_exponent()),
                                     piv ? detail::fd(*piv) : ""};
        detail::append_metrics(row, detail::sweep_cell(cfg, strategy, cell_system, targets, opts.threads));
        csv.write_row(row);
      }
    }
  }
  csv.close();
  p.files.push_back(path);
  return p.files;
}

// ---------------------------------------------------------------------------
// Entry point.
// ---------------------------------------------------------------------------

inline int run(int argc, char** argv) {
  CLI::App app{"martingale tail bounds, scheduling optimization and simulation for fork-join queues"};
  app.require_subcommand(1);

  std::string config_path;
  RunOptions opts;

  struct SubSpec {
    const char* name;
    const char* desc;
  };
  const SubSpec specs[] = {
      {"bound", "evaluate tail bounds on a threshold grid"},
      {"simulate", "run the discrete-event simulator"},
      {"optimize", "optimize the scheduling strategy against a bound"},
      {"compare", "check simulated tails against the bounds"},
      {"sweep", "simulate across a parameter grid"},
  };
  for (const SubSpec& spec : specs) {
    CLI::App* sub = app.add_subcommand(spec.name, spec.desc);
    sub->add_option("-c,--config", config_path, "experiment configuration (JSON)")->required();
    sub->add_option("-o,--out", opts.out_dir, "output directory (overrides the config)");
    sub->add_option("--seed", opts.seed, "seed override");
    sub->add_option("-t,--threads", opts.threads, "worker threads (default: FJLAB_THREADS or all cores)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ExperimentConfig cfg = parse_config_text(read_file(config_path));
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "bound") {
      cmd_bound(std::move(cfg), opts);
    } else if (name == "simulate") {
      cmd_simulate(std::move(cfg), opts);
    } else if (name == "optimize") {
      cmd_optimize(std::move(cfg), opts);
    } else if (name == "compare") {
      cmd_compare(std::move(cfg), opts);
    } else {
      cmd_sweep(std::move(cfg), opts);
    }
    return 0;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace fjlab::cli
