// lrp: sample graphs, measure them, run sweeps, fit scaling laws and
// self-check against the brute-force oracles.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "lrp/lrp.hpp"
#include "lrp/oracle.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitMismatch = 1;
constexpr int kExitConfig = 2;

struct GraphArgs {
  std::string topology = "cycle";
  std::uint32_t n = 64;
  double s = 2.0;
  double beta = 1.0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  int dim = 0;

  lrp::ModelParams params() const {
    lrp::ModelParams p;
    p.topology = lrp::parse_topology(topology);
    p.n = n;
    p.s = s;
    p.beta = beta;
    p.seed = seed;
    p.dim = dim > 0 ? dim : (topology == "box2" ? 2 : 1);
    p.validate();
    return p;
  }
};

void add_graph_options(CLI::App* cmd, GraphArgs& g) {
  cmd->add_option("--topology", g.topology, "cycle, path, box1 or box2")
      ->check(CLI::IsMember({"cycle", "path", "box", "box1", "box2"}));
  cmd->add_option("--n", g.n, "side length")->required();
  cmd->add_option("--s", g.s, "decay exponent")->required();
  cmd->add_option("--beta", g.beta, "intensity (ignored by boxes)");
  cmd->add_option("--seed", g.seed, "master seed");
  cmd->add_option("--trial", g.trial, "trial index");
  cmd->add_option("--dim", g.dim, "box dimension (1 or 2)");
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw lrp::ConfigError("cannot write '" + path + "'");
  return os;
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

int run_sample(const GraphArgs& args, const std::string& out) {
  const auto g = lrp::sample_trial(args.params(), args.trial);
  if (out.empty()) {
    lrp::write_edge_list(std::cout, g);
  } else {
    auto os = open_out(out);
    lrp::write_edge_list(os, g);
  }
  return kExitOk;
}

int run_stats(const GraphArgs& args, const std::vector<std::string>& metrics,
              double threshold) {
  const auto p = args.params();
  lrp::MetricToggles on{false, false, false, false, false, false};
  for (const auto& m : metrics) {
    if (m == "diameter") on.diameter = true;
    else if (m == "cuts") on.cuts = true;
    else if (m == "cheeger") on.cheeger = true;
    else if (m == "resistance") on.resistance = true;
    else if (m == "mixing") on.mixing = true;
    else if (m == "half_boundary") on.half_boundary = true;
    else throw lrp::ConfigError("unknown metric '" + m + "'");
  }
  lrp::MeasureOptions opt_;
  opt_.mixing_threshold = threshold;
  const auto g = lrp::sample_trial(p, args.trial);
  const auto r = lrp::measure(g, on, opt_, p.seed, args.trial);

  json j;
  j["params"] = {{"topology", lrp::topology_label(p.topology, p.dim)},
                 {"n", p.n},
                 {"s", p.s},
                 {"beta", p.beta},
                 {"seed", p.seed},
                 {"trial", args.trial}};
  j["vertices"] = r.n;
  j["edges"] = r.edge_count;
  j["mean_degree"] = r.mean_degree;
  j["max_degree"] = r.max_degree;
  j["diameter"] = opt(r.diameter);
  j["diameter_is_exact"] = r.diameter ? json(r.diameter_is_exact) : json(nullptr);
  j["diameter_upper"] = opt(r.diameter_upper);
  j["num_cut_points"] = opt(r.num_cut_points);
  j["half_boundary"] = opt(r.half_boundary);
  j["cheeger_arc"] = opt(r.cheeger_arc);
  j["cheeger_exact"] = opt(r.cheeger_exact);
  j["resistance_p50"] = opt(r.resistance_p50);
  j["resistance_p90"] = opt(r.resistance_p90);
  j["resistance_max_probe"] = opt(r.resistance_max_probe);
  json pairs = json::array();
  for (const auto& s : r.resistance_samples)
    pairs.push_back({{"u", s.u}, {"v", s.v}, {"resistance", s.resistance}});
  j["resistance_samples"] = pairs;
  j["tau_tv"] = opt(r.tau_tv);
  j["tau_censored"] = r.tau_tv ? json(r.tau_censored) : json(nullptr);
  j["tv_monotone"] = r.tau_tv ? json(r.tv_monotone) : json(nullptr);
  std::cout << j.dump(2) << '\n';
  return kExitOk;
}

lrp::SweepConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw lrp::ConfigError("cannot read config '" + path + "'");
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw lrp::ConfigError(std::string("config: ") + e.what());
  }
  return lrp::parse_config(j);
}

int run_sweep_cmd(const std::string& config_path, std::optional<int> workers,
                  const std::string& out_flag) {
  const auto config = load_config(config_path);
  const int w = lrp::resolve_workers(workers, config);
  const std::string out = out_flag.empty() ? config.output : out_flag;
  const auto rows = lrp::run_sweep(config, w);
  if (out.empty() || out == "-") {
    lrp::write_csv(std::cout, rows);
  } else {
    auto os = open_out(out);
    lrp::write_csv(os, rows);
    std::cerr << "wrote " << rows.size() << " rows to " << out << '\n';
  }
  return kExitOk;
}

int run_fit(const std::string& csv, const std::string& column,
            const std::string& config_path) {
  std::ifstream is(csv);
  if (!is) throw lrp::ConfigError("cannot read '" + csv + "'");
  const auto rows = lrp::read_csv(is);
  lrp::RegimeThresholds th;
  if (!config_path.empty()) th = load_config(config_path).regime_thresholds;

  using Cell = std::tuple<std::string, double, double>;
  std::map<Cell, std::vector<lrp::SweepRow>> cells;
  for (const auto& r : rows)
    cells[{lrp::topology_label(r.topology, r.dim), r.s, r.beta}].push_back(r);

  std::cout << std::left << std::setw(8) << "topology" << std::setw(8) << "s"
            << std::setw(8) << "beta" << std::setw(10) << "model" << std::right
            << std::setw(12) << "slope" << std::setw(12) << "intercept"
            << std::setw(10) << "r2" << std::setw(8) << "points" << "  regime\n";
  for (const auto& [cell, cell_rows] : cells) {
    const auto& [topo, s, beta] = cell;
    std::vector<lrp::FitResult> fits;
    try {
      fits = lrp::fit_all(cell_rows, column, th);
    } catch (const std::invalid_argument& e) {
      std::cout << std::left << std::setw(8) << topo << std::setw(8) << s
                << std::setw(8) << beta << "skipped: " << e.what() << '\n';
      continue;
    }
    for (const auto& f : fits)
      std::cout << std::left << std::setw(8) << topo << std::setw(8) << s
                << std::setw(8) << beta << std::setw(10) << lrp::to_string(f.model)
                << std::right << std::fixed << std::setprecision(4)
                << std::setw(12) << f.slope << std::setw(12) << f.intercept
                << std::setw(10) << f.r_squared << std::setw(8) << f.n_points
                << "  " << lrp::to_string(f.regime_label) << '\n'
                << std::defaultfloat << std::setprecision(6);
  }
  return kExitOk;
}

struct HierarchyArgs {
  std::vector<std::uint64_t> levels;
  double alpha = 0.0;
  int k = 0;
  double s = 1.5;
  double beta = 4.0;
  int trials = 1000;
  std::uint64_t seed = 0;
  int lo = 1;
  int hi = 0;
};

int run_hierarchy(const HierarchyArgs& a) {
  if (a.levels.empty() == (a.k == 0))
    throw lrp::ConfigError("give either --levels or --alpha with --k");
  const lrp::HierarchySpec spec =
      a.levels.empty() ? lrp::HierarchySpec::exponential(a.alpha, a.k)
                       : lrp::HierarchySpec(a.levels);
  const lrp::DegreeRange range{a.lo, a.hi > 0 ? a.hi : spec.levels()};
  if (a.trials < 1) throw lrp::ConfigError("--trials must be >= 1");
  const lrp::ModelParams p{lrp::Topology::Path,
                           static_cast<std::uint32_t>(spec.total()), a.s,
                           a.beta, a.seed, 1};
  p.validate();

  std::map<int, std::tuple<std::uint64_t, std::uint64_t, int>> per_degree;
  int held = 0;
  std::uint64_t worst_diameter = 0;
  for (int t = 0; t < a.trials; ++t) {
    const auto g = lrp::sample_trial(p, static_cast<std::uint64_t>(t));
    bool ok = true;
    for (const auto& row : lrp::nu_census(g, spec, range)) {
      auto& [failing, gaps, trials_failed] = per_degree[row.degree];
      failing += row.failing_components;
      gaps += row.unattached_pairs;
      trials_failed += row.failing_components > 0;
      ok = ok && row.failing_components == 0;
    }
    if (ok) {
      ++held;
      worst_diameter = std::max<std::uint64_t>(worst_diameter, lrp::diameter_exact(g));
    }
  }

  std::cout << "N_k=" << spec.total() << " degrees " << range.lo << ".."
            << range.hi << " s=" << a.s << " beta=" << a.beta
            << " trials=" << a.trials << '\n';
  std::cout << std::setw(6) << "degree" << std::setw(12) << "components"
            << std::setw(16) << "mean_failing" << std::setw(16) << "mean_gaps"
            << std::setw(14) << "P(fail)" << '\n';
  for (const auto& [degree, v] : per_degree) {
    const auto& [failing, gaps, trials_failed] = v;
    const double tn = a.trials;
    std::cout << std::setw(6) << degree << std::setw(12)
              << spec.total() / spec.size(degree) << std::setw(16)
              << static_cast<double>(failing) / tn << std::setw(16)
              << static_cast<double>(gaps) / tn << std::setw(14)
              << trials_failed / tn << '\n';
  }
  std::cout << "P(nu) empirical " << static_cast<double>(held) / a.trials
            << ", union bound " << lrp::nu_union_bound(spec, range, a.s, a.beta)
            << '\n';
  std::cout << "diameter bound " << lrp::nu_diameter_bound(spec, range);
  if (held > 0) std::cout << ", max diameter given nu " << worst_diameter;
  std::cout << '\n';
  return kExitOk;
}

int run_oracle(int trials, std::uint64_t seed) {
  int failures = 0;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) {
      ++failures;
      std::cerr << "mismatch: " << what << '\n';
    }
  };
  for (int t = 0; t < trials; ++t) {
    const auto trial = static_cast<std::uint64_t>(t);
    const double s = 0.5 + 0.25 * (t % 12);
    const lrp::ModelParams big{lrp::Topology::Cycle, 64, s, 1.0, seed, 1};
    const auto g = lrp::sample_trial(big, trial);
    check(lrp::diameter_exact(g) == lrp::oracle::diameter(g),
          "diameter, trial " + std::to_string(t));

    const lrp::ModelParams path{lrp::Topology::Path, 48, s, 1.0, seed, 1};
    const auto gp = lrp::sample_trial(path, trial);
    check(lrp::diameter_exact(gp) == lrp::oracle::diameter(gp),
          "path diameter, trial " + std::to_string(t));

    const auto n = static_cast<std::uint32_t>(4 + t % 13);
    const lrp::ModelParams small{lrp::Topology::Cycle, n, s, 1.0, seed, 1};
    const auto h = lrp::sample_trial(small, trial);
    const auto exact = lrp::cheeger_exact(h);
    const auto want = lrp::oracle::cheeger(h);
    check(exact.boundary_size * want.size == want.boundary * exact.set_size,
          "cheeger, trial " + std::to_string(t));
    const auto arc = lrp::cheeger_arc_upper(h);
    const auto arc_want = lrp::oracle::arc_cheeger(h);
    check(arc.boundary_size * arc_want.size == arc_want.boundary * arc.set_size,
          "arc cheeger, trial " + std::to_string(t));
    check(arc.ratio >= exact.ratio, "arc below exact, trial " + std::to_string(t));

    const lrp::ResistanceSolver solver(h);
    const auto v = static_cast<lrp::Vertex>(1 + t % (n - 1));
    check(std::abs(solver.resistance(0, v) - lrp::oracle::resistance(h, 0, v)) < 1e-9,
          "resistance, trial " + std::to_string(t));
  }
  for (std::uint32_t n = 4; n <= 256; n += 2) {
    const lrp::ModelParams p{lrp::Topology::Cycle, n, 1.5, 1.0, seed, 1};
    const double a = lrp::expected_half_boundary(p);
    const double b = lrp::expected_half_boundary_pairs(p);
    check(std::abs(a - b) <= 1e-9 * b, "expected half boundary, n=" + std::to_string(n));
  }
  for (std::uint32_t n = 3; n <= 64; ++n) {
    const lrp::ModelParams p{lrp::Topology::Cycle, n, 2.0, 0.0, seed, 1};
    check(lrp::diameter_exact(lrp::sample_trial(p, 0)) == n / 2,
          "bare cycle diameter, n=" + std::to_string(n));
  }
  std::cout << (failures == 0 ? "oracle: all checks passed\n"
                              : "oracle: " + std::to_string(failures) + " mismatches\n");
  return failures == 0 ? kExitOk : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Long-range percolation simulator"};
  app.require_subcommand(1);

  GraphArgs sample_args;
  std::string sample_out;
  auto* sample = app.add_subcommand("sample", "write one sample's edge list as CSV");
  add_graph_options(sample, sample_args);
  sample->add_option("--out", sample_out, "output file (default stdout)");

  GraphArgs stats_args;
  std::vector<std::string> stats_metrics{"diameter", "cuts", "half_boundary",
                                         "cheeger", "resistance", "mixing"};
  double stats_threshold = 0.25;
  auto* stats = app.add_subcommand("stats", "sample and print every metric as JSON");
  add_graph_options(stats, stats_args);
  stats->add_option("--metrics", stats_metrics, "metrics to compute")->delimiter(',');
  stats->add_option("--mixing-threshold", stats_threshold, "TV threshold");

  std::string sweep_config, sweep_out;
  std::optional<int> sweep_workers;
  auto* sweep = app.add_subcommand("sweep", "run a JSON sweep config and write CSV");
  sweep->add_option("--config", sweep_config, "config file")->required();
  sweep->add_option("--workers", sweep_workers, "worker threads");
  sweep->add_option("--out", sweep_out, "output CSV (overrides the config)");

  std::string fit_csv, fit_column = "diameter", fit_config;
  auto* fit = app.add_subcommand("fit", "fit scaling laws per parameter cell");
  fit->add_option("--csv", fit_csv, "sweep CSV")->required();
  fit->add_option("--column", fit_column, "column to fit");
  fit->add_option("--config", fit_config, "config providing regime thresholds");

  HierarchyArgs hier;
  auto* hierarchy = app.add_subcommand("hierarchy", "census of the sub-component attachment event");
  hierarchy->add_option("--levels", hier.levels, "branching factors, e.g. 4,4,4")->delimiter(',');
  hierarchy->add_option("--alpha", hier.alpha, "exponential mode: C_i = round(exp(alpha^i))");
  hierarchy->add_option("--k", hier.k, "exponential mode: number of levels");
  hierarchy->add_option("--s", hier.s, "decay exponent");
  hierarchy->add_option("--beta", hier.beta, "intensity");
  hierarchy->add_option("--trials", hier.trials, "samples");
  hierarchy->add_option("--seed", hier.seed, "master seed");
  hierarchy->add_option("--lo", hier.lo, "lowest degree checked");
  hierarchy->add_option("--hi", hier.hi, "highest degree checked (default k)");

  int oracle_trials = 60;
  std::uint64_t oracle_seed = 2024;
  auto* oracle = app.add_subcommand("oracle", "cross-check against brute-force oracles");
  oracle->add_option("--trials", oracle_trials, "random instances");
  oracle->add_option("--seed", oracle_seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*sample) return run_sample(sample_args, sample_out);
    if (*stats) return run_stats(stats_args, stats_metrics, stats_threshold);
    if (*sweep) return run_sweep_cmd(sweep_config, sweep_workers, sweep_out);
    if (*fit) return run_fit(fit_csv, fit_column, fit_config);
    if (*hierarchy) return run_hierarchy(hier);
    if (*oracle) return run_oracle(oracle_trials, oracle_seed);
  } catch (const lrp::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lrp::CsvError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMismatch;
  }
  return kExitOk;
}
