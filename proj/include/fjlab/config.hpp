#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fjlab/distributions.hpp"
#include "fjlab/errors.hpp"
#include "fjlab/optimizer.hpp"
#include "fjlab/rate_models.hpp"
#include "fjlab/simulator.hpp"
#include "fjlab/strategies.hpp"
#include "fjlab/system.hpp"

namespace fjlab {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Experiment configuration: the JSON surface of the CLI. Parsing is
// strict (unknown keys are errors) and every parsed config serializes
// back to JSON that re-parses to an identical experiment.
// ---------------------------------------------------------------------------

struct SigmaGrid {
  double start = 0.0;
  double stop = 0.0;
  int points = 0;
  std::vector<double> values;  // explicit grid wins when non-empty

  std::vector<double> materialize() const {
    if (!values.empty()) return values;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
      grid.push_back(points == 1 ? start : start + (stop - start) * i / (points - 1));
    }
    return grid;
  }

  friend bool operator==(const SigmaGrid&, const SigmaGrid&) = default;
};

struct SimulationSettings {
  std::int64_t n_jobs = 100'000;
  std::int64_t warmup = -1;
  int replications = 1;
  StrategyMode strategy_mode = StrategyMode::per_run;
  bool dump_samples = false;

  friend bool operator==(const SimulationSettings&, const SimulationSettings&) = default;
};

enum class OptimizeMode { binomial_p, pmf, budget };

struct OptimizeSettings {
  OptimizeMode mode = OptimizeMode::binomial_p;
  BoundObjective objective = BoundObjective::waiting;
  std::optional<double> sigma;
  std::optional<double> tail_probability;  // threshold taken from inverting the single-server bound
  std::optional<double> budget;
  double grid_resolution = 1e-3;

  friend bool operator==(const OptimizeSettings&, const OptimizeSettings&) = default;
};

struct PiSweep {
  int server = 0;  // 1-based index
  std::vector<double> values;

  friend bool operator==(const PiSweep&, const PiSweep&) = default;
};

enum class SweepKind { grid, det_vs_stoch };

struct SweepSettings {
  SweepKind kind = SweepKind::grid;
  std::vector<double> p;
  std::vector<double> phi;
  std::optional<PiSweep> pi;

  friend bool operator==(const SweepSettings&, const SweepSettings&) = default;
};

struct ExperimentConfig {
  int schema_version = 1;
  std::uint64_t seed = 1;
  std::string out_dir = ".";
  std::optional<FJSystem> system;
  std::optional<Strategy> strategy;
  std::optional<HierarchicalModel> rate_model;
  std::optional<SigmaGrid> sigma_grid;
  std::vector<double> percentile_targets;
  std::vector<std::string> families;
  std::optional<SimulationSettings> simulation;
  std::optional<OptimizeSettings> optimize;
  std::optional<SweepSettings> sweep;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

namespace cfg_detail {

inline void reject_unknown(const json& obj, const char* path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(std::string(path) + ": unknown field \"" + key + "\"");
  }
}

inline const json& require_object(const json& j, const char* path) {
  if (!j.is_object()) throw ConfigError(std::string(path) + ": expected an object");
  return j;
}

inline double require_number(const json& obj, const char* key, const char* path) {
  if (!obj.contains(key)) throw ConfigError(std::string(path) + ": missing field \"" + key + "\"");
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string(path) + "." + key + ": expected a number");
  return v.get<double>();
}

inline double number_or(const json& obj, const char* key, const char* path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(std::string(path) + "." + key + ": expected a number");
  return v.get<double>();
}

inline std::int64_t integer_or(const json& obj, const char* key, const char* path, std::int64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string(path) + "." + key + ": expected an integer");
  return v.get<std::int64_t>();
}

inline int require_int(const json& obj, const char* key, const char* path) {
  if (!obj.contains(key)) throw ConfigError(std::string(path) + ": missing field \"" + key + "\"");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) throw ConfigError(std::string(path) + "." + key + ": expected an integer");
  return v.get<int>();
}

inline std::string require_string(const json& obj, const char* key, const char* path) {
  if (!obj.contains(key)) throw ConfigError(std::string(path) + ": missing field \"" + key + "\"");
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(std::string(path) + "." + key + ": expected a string");
  return v.get<std::string>();
}

inline std::vector<double> number_array(const json& v, const char* path) {
  if (!v.is_array()) throw ConfigError(std::string(path) + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number()) throw ConfigError(std::string(path) + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

inline Distribution parse_distribution(const json& j, const char* path, bool service_position) {
  require_object(j, path);
  std::string kind = require_string(j, "kind", path);
  Distribution dist = Distribution::deterministic(0.0);
  try {
    if (kind == "exponential") {
      reject_unknown(j, path, {"kind", "rate"});
      dist = Distribution::exponential(require_number(j, "rate", path));
    } else if (kind == "uniform") {
      reject_unknown(j, path, {"kind", "lower", "upper"});
      dist = Distribution::uniform_interval(require_number(j, "lower", path), require_number(j, "upper", path));
    } else if (kind == "deterministic") {
      reject_unknown(j, path, {"kind", "value"});
      dist = Distribution::deterministic(require_number(j, "value", path));
    } else {
      throw ConfigError(std::string(path) + ": unknown distribution kind \"" + kind + "\"");
    }
  } catch (const RangeError& e) {
    throw ConfigError(std::string(path) + ": " + e.what());
  }
  if (service_position && !(dist.mean() > 0.0)) {
    throw ConfigError(std::string(path) + ": service distributions need a strictly positive mean");
  }
  return dist;
}

inline json distribution_to_json(const Distribution& d) {
  switch (d.kind()) {
    case DistKind::exponential: return {{"kind", "exponential"}, {"rate", d.rate()}};
    case DistKind::uniform_interval: return {{"kind", "uniform"}, {"lower", d.lower()}, {"upper", d.upper()}};
    case DistKind::deterministic: return {{"kind", "deterministic"}, {"value", d.value()}};
  }
  return {};
}

inline FJSystem parse_system(const json& j) {
  require_object(j, "system");
  reject_unknown(j, "system", {"servers", "n", "service", "arrival", "phi"});
  Distribution arrival = [&] {
    if (!j.contains("arrival")) throw ConfigError("system: missing field \"arrival\"");
    return parse_distribution(j.at("arrival"), "system.arrival", false);
  }();
  double phi = number_or(j, "phi", "system", 0.0);
  std::vector<ServerSpec> servers;
  if (j.contains("servers")) {
    if (j.contains("n") || j.contains("service")) {
      throw ConfigError("system: give either \"servers\" or the homogeneous \"n\"/\"service\" pair, not both");
    }
    const json& arr = j.at("servers");
    if (!arr.is_array() || arr.empty()) throw ConfigError("system.servers: expected a non-empty array");
    for (const json& e : arr) {
      require_object(e, "system.servers[]");
      reject_unknown(e, "system.servers[]", {"service", "pi"});
      if (!e.contains("service")) throw ConfigError("system.servers[]: missing field \"service\"");
      ServerSpec spec{parse_distribution(e.at("service"), "system.servers[].service", true),
                      number_or(e, "pi", "system.servers[]", 1.0)};
      servers.push_back(spec);
    }
  } else {
    if (!j.contains("n") || !j.contains("service")) {
      throw ConfigError("system: needs \"servers\" or both \"n\" and \"service\"");
    }
    int n = require_int(j, "n", "system");
    if (n < 1) throw ConfigError("system.n: must be >= 1");
    Distribution service = parse_distribution(j.at("service"), "system.service", true);
    servers.assign(static_cast<std::size_t>(n), ServerSpec{service});
  }
  try {
    return FJSystem(std::move(servers), arrival, phi);
  } catch (const RangeError& e) {
    throw ConfigError(std::string("system: ") + e.what());
  }
}

inline json system_to_json(const FJSystem& system) {
  json servers = json::array();
  for (const ServerSpec& s : system.servers()) {
    servers.push_back({{"service", distribution_to_json(s.service)}, {"pi", s.select_probability}});
  }
  return {{"servers", servers},
          {"arrival", distribution_to_json(system.arrival())},
          {"phi", system.scaling_exponent()}};
}

inline Strategy parse_strategy(const json& j) {
  require_object(j, "strategy");
  std::string kind = require_string(j, "kind", "strategy");
  try {
    if (kind == "deterministic") {
      reject_unknown(j, "strategy", {"kind", "s", "n"});
      int s = require_int(j, "s", "strategy");
      int n = static_cast<int>(integer_or(j, "n", "strategy", s));
      return Strategy::deterministic(s, n);
    }
    if (kind == "uniform") {
      reject_unknown(j, "strategy", {"kind", "n"});
      return Strategy::uniform(require_int(j, "n", "strategy"));
    }
    if (kind == "binomial") {
      reject_unknown(j, "strategy", {"kind", "n", "p"});
      return Strategy::binomial(require_int(j, "n", "strategy"), require_number(j, "p", "strategy"));
    }
    if (kind == "power_series") {
      reject_unknown(j, "strategy", {"kind", "n", "kappa", "coefficients"});
      if (!j.contains("coefficients")) throw ConfigError("strategy: missing field \"coefficients\"");
      return Strategy::power_series(require_int(j, "n", "strategy"), require_number(j, "kappa", "strategy"),
                                    number_array(j.at("coefficients"), "strategy.coefficients"));
    }
    if (kind == "explicit") {
      reject_unknown(j, "strategy", {"kind", "weights"});
      if (!j.contains("weights")) throw ConfigError("strategy: missing field \"weights\"");
      return Strategy::explicit_pmf(number_array(j.at("weights"), "strategy.weights"));
    }
  } catch (const RangeError& e) {
    throw ConfigError(std::string("strategy: ") + e.what());
  }
  throw ConfigError("strategy: unknown kind \"" + kind + "\"");
}

inline json strategy_to_json(const Strategy& st) {
  switch (st.kind()) {
    case StrategyKind::deterministic:
      return {{"kind", "deterministic"}, {"s", st.fixed_servers()}, {"n", st.pool_size()}};
    case StrategyKind::uniform:
      return {{"kind", "uniform"}, {"n", st.pool_size()}};
    case StrategyKind::binomial:
      return {{"kind", "binomial"}, {"n", st.pool_size()}, {"p", st.parameter_p()}};
    case StrategyKind::power_series:
      return {{"kind", "power_series"},
              {"n", st.pool_size()},
              {"kappa", st.parameter_kappa()},
              {"coefficients", st.coefficients()}};
    case StrategyKind::explicit_pmf:
      return {{"kind", "explicit"}, {"weights", st.masses()}};
  }
  return {};
}

inline HierarchicalModel parse_rate_model(const json& j, const std::optional<FJSystem>& system) {
  require_object(j, "rate_model");
  std::string kind = require_string(j, "kind", "rate_model");
  try {
    if (kind == "two_class") {
      reject_unknown(j, "rate_model", {"kind", "slow_rate", "fast_rate", "slow_probability"});
      return TwoClassModel(require_number(j, "slow_rate", "rate_model"),
                           require_number(j, "fast_rate", "rate_model"),
                           require_number(j, "slow_probability", "rate_model"));
    }
    if (kind == "truncated_exponential") {
      reject_unknown(j, "rate_model", {"kind", "hyper_rate"});
      if (!system || system->arrival().kind() != DistKind::exponential) {
        throw ConfigError("rate_model: truncated_exponential needs a system with exponential arrivals");
      }
      return TruncatedExpModel(require_number(j, "hyper_rate", "rate_model"), system->arrival().rate());
    }
  } catch (const RangeError& e) {
    throw ConfigError(std::string("rate_model: ") + e.what());
  } catch (const ParameterOrderError& e) {
    throw ConfigError(std::string("rate_model: ") + e.what());
  }
  throw ConfigError("rate_model: unknown kind \"" + kind + "\"");
}

inline json rate_model_to_json(const HierarchicalModel& model) {
  if (const auto* two = std::get_if<TwoClassModel>(&model)) {
    return {{"kind", "two_class"},
            {"slow_rate", two->slow_rate()},
            {"fast_rate", two->fast_rate()},
            {"slow_probability", two->slow_probability()}};
  }
  const auto& trunc = std::get<TruncatedExpModel>(model);
  return {{"kind", "truncated_exponential"}, {"hyper_rate", trunc.hyper_rate()}};
}

inline SigmaGrid parse_sigma_grid(const json& j) {
  require_object(j, "sigma_grid");
  SigmaGrid grid;
  if (j.contains("values")) {
    reject_unknown(j, "sigma_grid", {"values"});
    grid.values = number_array(j.at("values"), "sigma_grid.values");
    if (grid.values.empty()) throw ConfigError("sigma_grid.values: must be non-empty");
    for (double v : grid.values) {
      if (!(v >= 0.0)) throw ConfigError("sigma_grid.values: thresholds must be >= 0");
    }
    return grid;
  }
  reject_unknown(j, "sigma_grid", {"start", "stop", "points"});
  grid.start = number_or(j, "start", "sigma_grid", 0.0);
  grid.stop = require_number(j, "stop", "sigma_grid");
  grid.points = require_int(j, "points", "sigma_grid");
  if (!(grid.start >= 0.0) || !(grid.stop >= grid.start)) {
    throw ConfigError("sigma_grid: needs 0 <= start <= stop");
  }
  if (grid.points < 1) throw ConfigError("sigma_grid.points: must be >= 1");
  return grid;
}

inline json sigma_grid_to_json(const SigmaGrid& grid) {
  if (!grid.values.empty()) return {{"values", grid.values}};
  return {{"start", grid.start}, {"stop", grid.stop}, {"points", grid.points}};
}

inline SimulationSettings parse_simulation(const json& j) {
  require_object(j, "simulation");
  reject_unknown(j, "simulation", {"n_jobs", "warmup", "replications", "strategy_mode", "dump_samples"});
  SimulationSettings s;
  s.n_jobs = integer_or(j, "n_jobs", "simulation", s.n_jobs);
  s.warmup = integer_or(j, "warmup", "simulation", s.warmup);
  s.replications = static_cast<int>(integer_or(j, "replications", "simulation", s.replications));
  if (j.contains("strategy_mode")) {
    std::string mode = require_string(j, "strategy_mode", "simulation");
    if (mode == "per_run") {
      s.strategy_mode = StrategyMode::per_run;
    } else if (mode == "per_job") {
      s.strategy_mode = StrategyMode::per_job;
    } else {
      throw ConfigError("simulation.strategy_mode: expected \"per_run\" or \"per_job\"");
    }
  }
  if (j.contains("dump_samples")) {
    if (!j.at("dump_samples").is_boolean()) throw ConfigError("simulation.dump_samples: expected a boolean");
    s.dump_samples = j.at("dump_samples").get<bool>();
  }
  if (s.n_jobs < 1) throw ConfigError("simulation.n_jobs: must be >= 1");
  if (s.warmup >= s.n_jobs) throw ConfigError("simulation.warmup: must be smaller than n_jobs");
  if (s.replications < 1) throw ConfigError("simulation.replications: must be >= 1");
  return s;
}

inline json simulation_to_json(const SimulationSettings& s) {
  return {{"n_jobs", s.n_jobs},
          {"warmup", s.warmup},
          {"replications", s.replications},
          {"strategy_mode", s.strategy_mode == StrategyMode::per_run ? "per_run" : "per_job"},
          {"dump_samples", s.dump_samples}};
}

inline OptimizeSettings parse_optimize(const json& j) {
  require_object(j, "optimize");
  reject_unknown(j, "optimize", {"mode", "objective", "sigma", "tail_probability", "budget", "grid_resolution"});
  OptimizeSettings s;
  std::string mode = require_string(j, "mode", "optimize");
  if (mode == "binomial_p") {
    s.mode = OptimizeMode::binomial_p;
  } else if (mode == "pmf") {
    s.mode = OptimizeMode::pmf;
  } else if (mode == "budget") {
    s.mode = OptimizeMode::budget;
  } else {
    throw ConfigError("optimize.mode: expected \"binomial_p\", \"pmf\" or \"budget\"");
  }
  if (j.contains("objective")) {
    std::string objective = require_string(j, "objective", "optimize");
    if (objective == "waiting") {
      s.objective = BoundObjective::waiting;
    } else if (objective == "response") {
      s.objective = BoundObjective::response;
    } else {
      throw ConfigError("optimize.objective: expected \"waiting\" or \"response\"");
    }
  }
  if (j.contains("sigma")) s.sigma = require_number(j, "sigma", "optimize");
  if (j.contains("tail_probability")) s.tail_probability = require_number(j, "tail_probability", "optimize");
  if (j.contains("budget")) s.budget = require_number(j, "budget", "optimize");
  s.grid_resolution = number_or(j, "grid_resolution", "optimize", s.grid_resolution);
  if (s.sigma && !(*s.sigma >= 0.0)) throw ConfigError("optimize.sigma: must be >= 0");
  if (s.tail_probability && !(*s.tail_probability > 0.0 && *s.tail_probability < 1.0)) {
    throw ConfigError("optimize.tail_probability: must lie in (0,1)");
  }
  if (s.mode != OptimizeMode::budget && !s.sigma && !s.tail_probability) {
    throw ConfigError("optimize: needs \"sigma\" or \"tail_probability\"");
  }
  if (s.mode == OptimizeMode::budget && !s.budget) throw ConfigError("optimize: budget mode needs \"budget\"");
  return s;
}

inline json optimize_to_json(const OptimizeSettings& s) {
  json j{{"mode", s.mode == OptimizeMode::binomial_p ? "binomial_p"
                  : s.mode == OptimizeMode::pmf      ? "pmf"
                                                     : "budget"},
         {"objective", s.objective == BoundObjective::waiting ? "waiting" : "response"},
         {"grid_resolution", s.grid_resolution}};
  if (s.sigma) j["sigma"] = *s.sigma;
  if (s.tail_probability) j["tail_probability"] = *s.tail_probability;
  if (s.budget) j["budget"] = *s.budget;
  return j;
}

inline SweepSettings parse_sweep(const json& j) {
  require_object(j, "sweep");
  reject_unknown(j, "sweep", {"kind", "p", "phi", "pi"});
  SweepSettings s;
  if (j.contains("kind")) {
    std::string kind = require_string(j, "kind", "sweep");
    if (kind == "grid") {
      s.kind = SweepKind::grid;
    } else if (kind == "det_vs_stoch") {
      s.kind = SweepKind::det_vs_stoch;
    } else {
      throw ConfigError("sweep.kind: expected \"grid\" or \"det_vs_stoch\"");
    }
  }
  if (j.contains("p")) s.p = number_array(j.at("p"), "sweep.p");
  if (j.contains("phi")) s.phi = number_array(j.at("phi"), "sweep.phi");
  if (j.contains("pi")) {
    const json& pj = require_object(j.at("pi"), "sweep.pi");
    reject_unknown(pj, "sweep.pi", {"server", "values"});
    PiSweep pi;
    pi.server = require_int(pj, "server", "sweep.pi");
    pi.values = number_array(pj.at("values"), "sweep.pi.values");
    if (pi.server < 1) throw ConfigError("sweep.pi.server: must be >= 1");
    s.pi = pi;
  }
  if (s.kind == SweepKind::grid && s.p.empty() && s.phi.empty() && !s.pi) {
    throw ConfigError("sweep: grid sweep needs at least one axis (\"p\", \"phi\" or \"pi\")");
  }
  return s;
}

inline json sweep_to_json(const SweepSettings& s) {
  json j{{"kind", s.kind == SweepKind::grid ? "grid" : "det_vs_stoch"}};
  if (!s.p.empty()) j["p"] = s.p;
  if (!s.phi.empty()) j["phi"] = s.phi;
  if (s.pi) j["pi"] = {{"server", s.pi->server}, {"values", s.pi->values}};
  return j;
}

}  // namespace cfg_detail

inline ExperimentConfig parse_config(const json& j) {
  cfg_detail::require_object(j, "config");
  cfg_detail::reject_unknown(j, "config",
                             {"schema_version", "seed", "out_dir", "system", "strategy", "rate_model", "sigma_grid",
                              "percentile_targets", "families", "simulation", "optimize", "sweep"});
  ExperimentConfig cfg;
  cfg.schema_version = cfg_detail::require_int(j, "schema_version", "config");
  if (cfg.schema_version != 1) {
    throw ConfigError("config.schema_version: only version 1 is supported, got " +
                      std::to_string(cfg.schema_version));
  }
  if (j.contains("seed")) {
    const json& v = j.at("seed");
    if (!v.is_number_integer() && !v.is_number_unsigned()) throw ConfigError("config.seed: expected an integer");
    cfg.seed = v.get<std::uint64_t>();
  }
  if (j.contains("out_dir")) cfg.out_dir = cfg_detail::require_string(j, "out_dir", "config");
  if (j.contains("system")) cfg.system = cfg_detail::parse_system(j.at("system"));
  if (j.contains("strategy")) cfg.strategy = cfg_detail::parse_strategy(j.at("strategy"));
  if (j.contains("rate_model")) cfg.rate_model = cfg_detail::parse_rate_model(j.at("rate_model"), cfg.system);
  if (j.contains("sigma_grid")) cfg.sigma_grid = cfg_detail::parse_sigma_grid(j.at("sigma_grid"));
  if (j.contains("percentile_targets")) {
    cfg.percentile_targets = cfg_detail::number_array(j.at("percentile_targets"), "percentile_targets");
    for (double t : cfg.percentile_targets) {
      if (!(t > 0.0 && t < 1.0)) throw ConfigError("percentile_targets: entries must lie in (0,1)");
    }
  }
  if (j.contains("families")) {
    const json& arr = j.at("families");
    if (!arr.is_array()) throw ConfigError("families: expected an array of strings");
    for (const json& e : arr) {
      if (!e.is_string()) throw ConfigError("families: expected an array of strings");
      std::string f = e.get<std::string>();
      if (f != "general" && f != "scaled" && f != "hierarchical") {
        throw ConfigError("families: unknown bound family \"" + f + "\"");
      }
      cfg.families.push_back(f);
    }
  }
  if (j.contains("simulation")) cfg.simulation = cfg_detail::parse_simulation(j.at("simulation"));
  if (j.contains("optimize")) cfg.optimize = cfg_detail::parse_optimize(j.at("optimize"));
  if (j.contains("sweep")) cfg.sweep = cfg_detail::parse_sweep(j.at("sweep"));

  if (cfg.system && cfg.strategy && cfg.strategy->pool_size() != cfg.system->server_count()) {
    throw ConfigError("strategy pool size " + std::to_string(cfg.strategy->pool_size()) +
                      " does not match the system's server count " + std::to_string(cfg.system->server_count()));
  }
  return cfg;
}

inline ExperimentConfig parse_config_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  return parse_config(j);
}

inline json to_json(const ExperimentConfig& cfg) {
  json j{{"schema_version", cfg.schema_version}, {"seed", cfg.seed}, {"out_dir", cfg.out_dir}};
  if (cfg.system) j["system"] = cfg_detail::system_to_json(*cfg.system);
  if (cfg.strategy) j["strategy"] = cfg_detail::strategy_to_json(*cfg.strategy);
  if (cfg.rate_model) j["rate_model"] = cfg_detail::rate_model_to_json(*cfg.rate_model);
  if (cfg.sigma_grid) j["sigma_grid"] = cfg_detail::sigma_grid_to_json(*cfg.sigma_grid);
  if (!cfg.percentile_targets.empty()) j["percentile_targets"] = cfg.percentile_targets;
  if (!cfg.families.empty()) j["families"] = cfg.families;
  if (cfg.simulation) j["simulation"] = cfg_detail::simulation_to_json(*cfg.simulation);
  if (cfg.optimize) j["optimize"] = cfg_detail::optimize_to_json(*cfg.optimize);
  if (cfg.sweep) j["sweep"] = cfg_detail::sweep_to_json(*cfg.sweep);
  return j;
}

// 64-bit FNV-1a over the canonical (key-sorted) JSON dump; stamped into
// every output file so results can be traced back to their exact inputs.
inline std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::string dump = to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace fjlab
