#pragma once

// Parameter sweeps: JSON configuration, deterministic parallel execution.

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <iostream>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "lrp/fit.hpp"
#include "lrp/report.hpp"
#include "lrp/sweep_row.hpp"

namespace lrp {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kConfigSchema = 1;

struct SweepConfig {
  Topology topology = Topology::Cycle;
  int dim = 1;
  std::vector<std::uint32_t> n_values;
  std::vector<double> s_values;
  std::vector<double> beta_values;
  int trials = 1;
  std::uint64_t master_seed = 0;
  MetricToggles metrics;
  std::string output;
  std::optional<int> workers;
  double mixing_threshold = 0.25;
  bool record_runtime = false;
  RegimeThresholds regime_thresholds;

  std::size_t cell_count() const {
    return n_values.size() * s_values.size() * beta_values.size();
  }

  void validate() const {
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (n_values.empty() || s_values.empty() || beta_values.empty())
      throw ConfigError("n_values, s_values and beta_values must be non-empty");
    if (metrics.cuts && topology != Topology::Path)
      throw ConfigError("the cuts metric requires path topology");
    if (metrics.half_boundary && topology != Topology::Cycle)
      throw ConfigError("the half_boundary metric requires cycle topology");
    if (!(mixing_threshold > 0.0 && mixing_threshold < 1.0))
      throw ConfigError("mixing_threshold must be in (0,1)");
    if (workers && *workers < 1) throw ConfigError("workers must be >= 1");
    for (auto n : n_values)
      for (double s : s_values)
        for (double b : beta_values) {
          ModelParams p{topology, n, s, b, 0, dim};
          try {
            p.validate();
          } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
          }
        }
  }
};

namespace detail {

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return j.at(key).get<T>();
}

}  // namespace detail

inline SweepConfig parse_config(const nlohmann::json& j) {
  SweepConfig c;
  try {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (!j.contains("schema") || j.at("schema").get<int>() != kConfigSchema)
      throw ConfigError("config must declare \"schema\": 1");
    const std::string topo = j.at("topology").get<std::string>();
    c.topology = parse_topology(topo);
    c.dim = detail::get_or<int>(j, "dim", topo == "box2" ? 2 : 1);
    c.n_values = j.at("n_values").get<std::vector<std::uint32_t>>();
    c.s_values = j.at("s_values").get<std::vector<double>>();
    c.beta_values = j.at("beta_values").get<std::vector<double>>();
    c.trials = j.at("trials").get<int>();
    c.master_seed = j.at("master_seed").get<std::uint64_t>();
    if (j.contains("metrics")) {
      const auto& m = j.at("metrics");
      c.metrics.diameter = detail::get_or(m, "diameter", false);
      c.metrics.cuts = detail::get_or(m, "cuts", false);
      c.metrics.cheeger = detail::get_or(m, "cheeger", false);
      c.metrics.resistance = detail::get_or(m, "resistance", false);
      c.metrics.mixing = detail::get_or(m, "mixing", false);
      c.metrics.half_boundary = detail::get_or(m, "half_boundary", false);
    }
    c.output = detail::get_or<std::string>(j, "output", "");
    if (j.contains("workers")) c.workers = j.at("workers").get<int>();
    c.mixing_threshold = detail::get_or(j, "mixing_threshold", 0.25);
    c.record_runtime = detail::get_or(j, "record_runtime", false);
    if (j.contains("regime_thresholds")) {
      const auto& t = j.at("regime_thresholds");
      auto& th = c.regime_thresholds;
      th.linear_min_slope = detail::get_or(t, "linear_min_slope", th.linear_min_slope);
      th.linear_min_r2 = detail::get_or(t, "linear_min_r2", th.linear_min_r2);
      th.polylog_min_r2 = detail::get_or(t, "polylog_min_r2", th.polylog_min_r2);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline nlohmann::json to_json(const SweepConfig& c) {
  nlohmann::json j;
  j["schema"] = kConfigSchema;
  j["topology"] = std::string(to_string(c.topology));
  j["dim"] = c.dim;
  j["n_values"] = c.n_values;
  j["s_values"] = c.s_values;
  j["beta_values"] = c.beta_values;
  j["trials"] = c.trials;
  j["master_seed"] = c.master_seed;
  j["metrics"] = {{"diameter", c.metrics.diameter},
                  {"cuts", c.metrics.cuts},
                  {"cheeger", c.metrics.cheeger},
                  {"resistance", c.metrics.resistance},
                  {"mixing", c.metrics.mixing},
                  {"half_boundary", c.metrics.half_boundary}};
  if (!c.output.empty()) j["output"] = c.output;
  if (c.workers) j["workers"] = *c.workers;
  j["mixing_threshold"] = c.mixing_threshold;
  j["record_runtime"] = c.record_runtime;
  j["regime_thresholds"] = {
      {"linear_min_slope", c.regime_thresholds.linear_min_slope},
      {"linear_min_r2", c.regime_thresholds.linear_min_r2},
      {"polylog_min_r2", c.regime_thresholds.polylog_min_r2}};
  return j;
}

/// Worker budget: CLI flag, then LRP_WORKERS, then the config, then the
/// hardware thread count.
inline int resolve_workers(std::optional<int> cli_flag,
                           const SweepConfig& config) {
  if (cli_flag) {
    if (*cli_flag < 1) throw ConfigError("--workers must be >= 1");
    return *cli_flag;
  }
  if (const char* env = std::getenv("LRP_WORKERS"); env && *env) {
    try {
      const int w = std::stoi(env);
      if (w >= 1) return w;
    } catch (const std::exception&) {
    }
    throw ConfigError("LRP_WORKERS must be a positive integer");
  }
  if (config.workers) return *config.workers;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Seed of one (cell, trial) sample; a pure function of its arguments.
inline std::uint64_t derived_seed(std::uint64_t master_seed,
                                  std::uint64_t cell_index,
                                  std::uint64_t trial) {
  return mix3(master_seed, cell_index, trial);
}

inline SweepRow run_cell_trial(const SweepConfig& config, std::uint32_t n,
                               double s, double beta, std::uint64_t cell_index,
                               std::uint64_t trial) {
  const auto started = std::chrono::steady_clock::now();
  SweepRow row;
  row.topology = config.topology;
  row.dim = config.dim;
  row.n = n;
  row.s = s;
  row.beta = beta;
  row.trial = trial;
  row.seed = derived_seed(config.master_seed, cell_index, trial);

  MeasureOptions opt;
  opt.mixing_threshold = config.mixing_threshold;
  try {
    const ModelParams params{config.topology, n, s, beta, row.seed, config.dim};
    const PercGraph g = sample_trial(params, 0);
    const MetricsReport rep = measure(g, config.metrics, opt, row.seed, 0);
    row.edges = rep.edge_count;
    row.mean_degree = rep.mean_degree;
    row.max_degree = rep.max_degree;
    if (rep.diameter) {
      row.diameter = *rep.diameter;
      row.diam_exact = rep.diameter_is_exact;
    }
    if (rep.num_cut_points) row.num_cuts = *rep.num_cut_points;
    if (rep.half_boundary) row.half_boundary = *rep.half_boundary;
    row.cheeger_arc = rep.cheeger_arc;
    row.cheeger_exact = rep.cheeger_exact;
    row.res_p50 = rep.resistance_p50;
    row.res_p90 = rep.resistance_p90;
    row.res_max = rep.resistance_max_probe;
    row.tau_tv = rep.tau_tv;
    row.tau_censored = rep.tau_censored;
  } catch (const std::exception& e) {
    // The row stays with whatever was filled in; the sweep carries on.
    std::cerr << "sweep: n=" << n << " s=" << s << " beta=" << beta
              << " trial=" << trial << ": " << e.what() << '\n';
  }
  if (config.record_runtime)
    row.runtime_ms = std::chrono::duration<double, std::milli>(
                         std::chrono::steady_clock::now() - started)
                         .count();
  return row;
}

/// Every (cell, trial) pair yields one row. Output is sorted by
/// (n, s, beta, trial) and does not depend on the worker count.
inline std::vector<SweepRow> run_sweep(const SweepConfig& config,
                                       int workers = 1) {
  config.validate();
  struct Task {
    std::uint32_t n;
    double s, beta;
    std::uint64_t cell, trial;
  };
  std::vector<Task> tasks;
  std::uint64_t cell = 0;
  for (auto n : config.n_values)
    for (double s : config.s_values)
      for (double b : config.beta_values) {
        for (int t = 0; t < config.trials; ++t)
          tasks.push_back({n, s, b, cell, static_cast<std::uint64_t>(t)});
        ++cell;
      }

  std::vector<SweepRow> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      rows[i] = run_cell_trial(config, t.n, t.s, t.beta, t.cell, t.trial);
    }
  };
  const int count = std::max(1, std::min<int>(workers, static_cast<int>(tasks.size())));
  {
    std::vector<std::jthread> pool;
    for (int w = 1; w < count; ++w) pool.emplace_back(worker);
    worker();
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.n, a.s, a.beta, a.trial) < std::tie(b.n, b.s, b.beta, b.trial);
  });
  return rows;
}

}  // namespace lrp
