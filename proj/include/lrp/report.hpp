#pragma once

// Per-sample measurement bundle.

#include <cstdint>
#include <optional>
#include <vector>

#include "lrp/expansion.hpp"
#include "lrp/metrics.hpp"
#include "lrp/model.hpp"
#include "lrp/rng.hpp"
#include "lrp/stats.hpp"

namespace lrp {

struct MetricToggles {
  bool diameter = true;
  bool cuts = false;
  bool cheeger = false;
  bool resistance = false;
  bool mixing = false;
  bool half_boundary = false;
};

struct MeasureOptions {
  std::size_t exact_diameter_max_n = 4096;
  int bound_sweeps = 8;
  std::size_t resistance_pairs = 16;
  std::size_t antipodal_probes = 8;
  double mixing_threshold = 0.25;
};

struct ResistanceSample {
  Vertex u = 0;
  Vertex v = 0;
  double resistance = 0.0;
};

struct MetricsReport {
  std::size_t n = 0;
  std::size_t edge_count = 0;
  double mean_degree = 0.0;
  std::size_t max_degree = 0;

  std::optional<std::uint32_t> diameter;
  bool diameter_is_exact = false;
  std::optional<std::uint32_t> diameter_upper;
  std::optional<std::uint32_t> ecc_lower;

  std::optional<std::size_t> num_cut_points;
  std::optional<std::size_t> half_boundary;
  std::optional<double> cheeger_arc;
  std::optional<double> cheeger_exact;

  std::vector<ResistanceSample> resistance_samples;
  std::optional<double> resistance_p50;
  std::optional<double> resistance_p90;
  std::optional<double> resistance_max_probe;

  std::optional<std::uint64_t> tau_tv;
  bool tau_censored = false;
  bool tv_monotone = true;
};

/// Runs the toggled measurements on one sample. Metrics that do not apply to
/// the sample's topology or size are left empty. `stream_key` and `trial`
/// key the resistance-pair stream.
inline MetricsReport measure(const PercGraph& g, const MetricToggles& on,
                             const MeasureOptions& opt,
                             std::uint64_t stream_key, std::uint64_t trial) {
  MetricsReport r;
  const std::size_t n = g.vertex_count();
  const Topology topo = g.params().topology;
  r.n = n;
  r.edge_count = g.edge_count();
  const DegreeStats ds = degree_stats(g);
  r.mean_degree = ds.mean;
  r.max_degree = ds.max;

  if (on.diameter) {
    if (n <= opt.exact_diameter_max_n) {
      r.diameter = diameter_exact(g);
      r.diameter_is_exact = true;
      r.diameter_upper = r.diameter;
      r.ecc_lower = diameter_bounds(g, 1).lower;
    } else {
      const DiameterBounds b = diameter_bounds(g, opt.bound_sweeps);
      r.diameter = b.lower;
      r.diameter_is_exact = false;
      r.diameter_upper = b.upper;
      r.ecc_lower = b.lower;
    }
  }
  if (on.cuts && topo == Topology::Path) r.num_cut_points = cut_points(g).size();
  if (on.half_boundary && topo == Topology::Cycle && n % 2 == 0 && n >= 4)
    r.half_boundary = half_boundary(g);
  if (on.cheeger) {
    if (topo == Topology::Cycle && n >= 3) r.cheeger_arc = cheeger_arc_upper(g).ratio;
    if (n >= 2 && n <= kCheegerExactMaxN) r.cheeger_exact = cheeger_exact(g).ratio;
  }
  if (on.resistance && n >= 2) {
    const ResistanceSolver solver(g);
    Stream rng = derive_stream(stream_key, trial, StreamTag::ResistancePairs);
    std::vector<double> values;
    for (std::size_t i = 0; i < opt.resistance_pairs; ++i) {
      const auto u = static_cast<Vertex>(rng.below(n));
      auto v = static_cast<Vertex>(rng.below(n - 1));
      if (v >= u) ++v;
      const double res = solver.resistance(u, v);
      r.resistance_samples.push_back({u, v, res});
      values.push_back(res);
    }
    if (!values.empty()) {
      r.resistance_p50 = stats::quantile(values, 0.5);
      r.resistance_p90 = stats::quantile(values, 0.9);
    }
    double worst = 0.0;
    const std::size_t probes = std::min(opt.antipodal_probes, n / 2);
    for (std::size_t k = 0; k < probes; ++k) {
      const auto u = static_cast<Vertex>(k * (n / 2) / probes);
      const auto v = static_cast<Vertex>(u + n / 2);
      worst = std::max(worst, solver.resistance(u, v));
    }
    r.resistance_max_probe = worst;
  }
  if (on.mixing) {
    const MixingResult m = mixing_time_tv(g, opt.mixing_threshold);
    r.tau_tv = m.steps;
    r.tau_censored = m.censored;
    r.tv_monotone = m.tv_monotone;
  }
  return r;
}

}  // namespace lrp
