#pragma once

// Long-range percolation laws on the cycle Z/nZ, the path [0, n) and the
// 1- or 2-dimensional box, plus the samplers that realize them.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lrp/binomial.hpp"
#include "lrp/rng.hpp"

namespace lrp {

using Vertex = std::uint32_t;

enum class Topology { Cycle, Path, Box };

inline std::string_view to_string(Topology t) {
  switch (t) {
    case Topology::Cycle: return "cycle";
    case Topology::Path: return "path";
    case Topology::Box: return "box";
  }
  return "?";
}

inline Topology parse_topology(std::string_view s) {
  if (s == "cycle") return Topology::Cycle;
  if (s == "path") return Topology::Path;
  if (s == "box" || s == "box1" || s == "box2") return Topology::Box;
  throw std::invalid_argument("unknown topology '" + std::string(s) + "'");
}

struct ModelParams {
  Topology topology = Topology::Cycle;
  std::uint32_t n = 1;  // side length
  double s = 2.0;
  double beta = 1.0;    // unused by the box law
  std::uint64_t seed = 0;
  int dim = 1;          // box only

  std::size_t vertex_count() const {
    if (topology == Topology::Box && dim == 2)
      return static_cast<std::size_t>(n) * n;
    return n;
  }

  void validate() const {
    if (n < 1) throw std::invalid_argument("ModelParams: n must be >= 1");
    if (!(s > 0.0)) throw std::invalid_argument("ModelParams: s must be > 0");
    if (!(beta >= 0.0))
      throw std::invalid_argument("ModelParams: beta must be >= 0");
    if (topology == Topology::Box) {
      if (dim != 1 && dim != 2)
        throw std::invalid_argument("ModelParams: box dim must be 1 or 2");
      if (!(s < dim))
        throw std::invalid_argument("ModelParams: box law requires s < dim");
    }
    if (vertex_count() > 0xffffffffULL)
      throw std::invalid_argument("ModelParams: too many vertices");
  }
};

/// Immutable undirected simple graph in compressed adjacency form. Neighbor
/// lists are sorted ascending.
class PercGraph {
 public:
  PercGraph() = default;

  /// Builds from an edge list of distinct unordered pairs with u != v.
  PercGraph(ModelParams params, std::size_t vertex_count,
            std::span<const std::pair<Vertex, Vertex>> edges)
      : params_(params), offsets_(vertex_count + 1, 0) {
    for (auto [u, v] : edges) {
      ++offsets_[u + 1];
      ++offsets_[v + 1];
    }
    for (std::size_t i = 0; i < vertex_count; ++i)
      offsets_[i + 1] += offsets_[i];
    adj_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (auto [u, v] : edges) {
      adj_[fill[u]++] = v;
      adj_[fill[v]++] = u;
    }
    for (std::size_t i = 0; i < vertex_count; ++i)
      std::sort(adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                adj_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]));
    edge_count_ = edges.size();
  }

  const ModelParams& params() const { return params_; }
  std::size_t vertex_count() const {
    return offsets_.empty() ? 0 : offsets_.size() - 1;
  }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const Vertex> neighbors(Vertex v) const {
    return {adj_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(Vertex v) const { return offsets_[v + 1] - offsets_[v]; }

  bool has_edge(Vertex u, Vertex v) const {
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
  }

  /// Edges as (u, v) with u < v, lexicographically sorted.
  std::vector<std::pair<Vertex, Vertex>> edges() const {
    std::vector<std::pair<Vertex, Vertex>> out;
    out.reserve(edge_count_);
    for (Vertex u = 0; u < vertex_count(); ++u)
      for (Vertex v : neighbors(u))
        if (u < v) out.emplace_back(u, v);
    return out;
  }

  /// Symmetry, no loops, no duplicates, edge count consistency.
  bool check_invariants() const {
    std::size_t half = 0;
    for (Vertex u = 0; u < vertex_count(); ++u) {
      auto nb = neighbors(u);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        if (nb[i] == u || nb[i] >= vertex_count()) return false;
        if (i > 0 && nb[i] <= nb[i - 1]) return false;
        if (!has_edge(nb[i], u)) return false;
      }
      half += nb.size();
    }
    return half == 2 * edge_count_;
  }

 private:
  ModelParams params_{};
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> adj_;
  std::size_t edge_count_ = 0;
};

inline std::uint64_t ring_distance(std::uint64_t x, std::uint64_t y,
                                   std::uint64_t n) {
  const std::uint64_t d = x > y ? x - y : y - x;
  return std::min(d, n - d);
}

/// Probability that a pair at distance d is open: 1 at d = 1, else
/// 1 - exp(-beta d^-s).
inline double edge_probability(std::int64_t d, double s, double beta) {
  if (d <= 0) throw std::invalid_argument("edge_probability: d must be >= 1");
  if (d == 1) return 1.0;
  return -std::expm1(-beta * std::pow(static_cast<double>(d), -s));
}

/// Box law: min(1, d^-s) with d the lattice (L1) distance.
inline double box_edge_probability(std::int64_t d, double s) {
  if (d <= 0)
    throw std::invalid_argument("box_edge_probability: d must be >= 1");
  return std::min(1.0, std::pow(static_cast<double>(d), -s));
}

namespace detail {

inline void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

inline void add_spine(const ModelParams& p,
                      std::vector<std::pair<Vertex, Vertex>>& edges) {
  const Vertex n = p.n;
  if (n < 2) return;
  for (Vertex i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  if (p.topology == Topology::Cycle && n >= 3) edges.emplace_back(0, n - 1);
}

/// Draws k distinct indices from [0, size) uniformly; order unspecified.
inline void sample_distinct(std::uint64_t size, std::uint64_t k, Stream& rng,
                            std::vector<std::uint64_t>& out) {
  out.clear();
  if (k == 0) return;
  if (k == size) {
    for (std::uint64_t i = 0; i < size; ++i) out.push_back(i);
    return;
  }
  if (k * 8 > size) {
    // Dense class: partial Fisher-Yates, cost O(size) <= 8k.
    std::vector<std::uint64_t> idx(size);
    for (std::uint64_t i = 0; i < size; ++i) idx[i] = i;
    for (std::uint64_t i = 0; i < k; ++i) {
      const std::uint64_t j = i + rng.below(size - i);
      std::swap(idx[i], idx[j]);
    }
    out.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
    return;
  }
  // Floyd's algorithm.
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(k * 2);
  for (std::uint64_t j = size - k; j < size; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    const std::uint64_t pick = chosen.contains(t) ? j : t;
    chosen.insert(pick);
    out.push_back(pick);
  }
}

/// One-dimensional stratified sampler. Class d holds the pairs (i, i + d mod
/// n) for i in [0, class_size(d)).
template <class ClassSize, class Prob>
void sample_classes(Vertex n, std::uint64_t max_d, ClassSize class_size,
                    Prob prob, Stream& rng,
                    std::vector<std::pair<Vertex, Vertex>>& edges) {
  std::vector<std::uint64_t> picks;
  for (std::uint64_t d = 2; d <= max_d; ++d) {
    const std::uint64_t size = class_size(d);
    if (size == 0) continue;
    const std::uint64_t k = sample_binomial(size, prob(d), rng);
    sample_distinct(size, k, rng, picks);
    for (std::uint64_t i : picks) {
      const auto a = static_cast<Vertex>(i);
      const auto b = static_cast<Vertex>((i + d) % n);
      edges.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
}

inline std::vector<double> distance_table(std::uint64_t max_d, double s,
                                          double beta) {
  std::vector<double> p(max_d + 1, 0.0);
  for (std::uint64_t d = 1; d <= max_d; ++d)
    p[d] = edge_probability(static_cast<std::int64_t>(d), s, beta);
  return p;
}

}  // namespace detail

/// Reference sampler: one uniform per pair in lexicographic order.
inline PercGraph sample_cycle_naive(const ModelParams& params, Stream& rng) {
  params.validate();
  detail::require(params.topology == Topology::Cycle,
                  "sample_cycle_naive: topology must be cycle");
  const Vertex n = params.n;
  std::vector<std::pair<Vertex, Vertex>> edges;
  detail::add_spine(params, edges);
  const auto prob = detail::distance_table(n / 2, params.s, params.beta);
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = x + 1; y < n; ++y) {
      const auto d = ring_distance(x, y, n);
      if (d < 2) continue;
      if (rng.uniform() < prob[d]) edges.emplace_back(x, y);
    }
  return PercGraph(params, n, edges);
}

/// Same law as sample_cycle_naive; cost O(n + edges).
inline PercGraph sample_cycle_stratified(const ModelParams& params,
                                         Stream& rng) {
  params.validate();
  detail::require(params.topology == Topology::Cycle,
                  "sample_cycle_stratified: topology must be cycle");
  const Vertex n = params.n;
  std::vector<std::pair<Vertex, Vertex>> edges;
  detail::add_spine(params, edges);
  const auto prob = detail::distance_table(n / 2, params.s, params.beta);
  detail::sample_classes(
      n, n / 2,
      [n](std::uint64_t d) -> std::uint64_t { return 2 * d == n ? n / 2 : n; },
      [&](std::uint64_t d) { return prob[d]; }, rng, edges);
  return PercGraph(params, n, edges);
}

inline PercGraph sample_path_naive(const ModelParams& params, Stream& rng) {
  params.validate();
  detail::require(params.topology == Topology::Path,
                  "sample_path_naive: topology must be path");
  const Vertex n = params.n;
  std::vector<std::pair<Vertex, Vertex>> edges;
  detail::add_spine(params, edges);
  const auto prob = detail::distance_table(n, params.s, params.beta);
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = x + 2; y < n; ++y)
      if (rng.uniform() < prob[y - x]) edges.emplace_back(x, y);
  return PercGraph(params, n, edges);
}

/// Linear distance |x - y|, deterministic edges between consecutive integers.
inline PercGraph sample_path(const ModelParams& params, Stream& rng) {
  params.validate();
  detail::require(params.topology == Topology::Path,
                  "sample_path: topology must be path");
  const Vertex n = params.n;
  std::vector<std::pair<Vertex, Vertex>> edges;
  detail::add_spine(params, edges);
  const auto prob = detail::distance_table(n, params.s, params.beta);
  detail::sample_classes(
      n, n == 0 ? 0 : n - 1, [n](std::uint64_t d) { return n - d; },
      [&](std::uint64_t d) { return prob[d]; }, rng, edges);
  return PercGraph(params, n, edges);
}

/// Box [0,n)^dim with all lattice edges and every other pair open with
/// probability min(1, d^-s), d the L1 distance. Row-major vertex ids.
inline PercGraph sample_box(const ModelParams& params, Stream& rng) {
  params.validate();
  detail::require(params.topology == Topology::Box,
                  "sample_box: topology must be box");
  const Vertex n = params.n;
  std::vector<std::pair<Vertex, Vertex>> edges;
  if (params.dim == 1) {
    detail::add_spine(params, edges);
    detail::sample_classes(
        n, n == 0 ? 0 : n - 1, [n](std::uint64_t d) { return n - d; },
        [&](std::uint64_t d) {
          return box_edge_probability(static_cast<std::int64_t>(d), params.s);
        },
        rng, edges);
    return PercGraph(params, n, edges);
  }
  const auto count = static_cast<Vertex>(params.vertex_count());
  std::vector<double> prob(2 * n + 1, 1.0);
  for (std::int64_t d = 1; d <= 2 * static_cast<std::int64_t>(n); ++d)
    prob[d] = box_edge_probability(d, params.s);
  for (Vertex a = 0; a < count; ++a) {
    const std::int64_t ar = a / n, ac = a % n;
    for (Vertex b = a + 1; b < count; ++b) {
      const std::int64_t br = b / n, bc = b % n;
      const std::int64_t d = std::abs(ar - br) + std::abs(ac - bc);
      if (d == 1) {
        edges.emplace_back(a, b);
      } else if (rng.uniform() < prob[d]) {
        edges.emplace_back(a, b);
      }
    }
  }
  return PercGraph(params, count, edges);
}

/// Production sampler for any supported topology.
inline PercGraph sample(const ModelParams& params, Stream& rng) {
  switch (params.topology) {
    case Topology::Cycle: return sample_cycle_stratified(params, rng);
    case Topology::Path: return sample_path(params, rng);
    case Topology::Box: return sample_box(params, rng);
  }
  throw std::invalid_argument("sample: unknown topology");
}

inline PercGraph sample_trial(const ModelParams& params, std::uint64_t trial) {
  Stream rng = derive_stream(params.seed, trial, StreamTag::Edges);
  return sample(params, rng);
}

/// Monotone coupling across beta: pair {x,y} carries one uniform U(x,y) and
/// is open in graph i iff U < edge_probability(d, s, beta_i). Cycle or path.
inline std::vector<PercGraph> sample_coupled(
    const std::vector<ModelParams>& params_list, std::uint64_t trial) {
  detail::require(!params_list.empty(), "sample_coupled: empty list");
  const ModelParams& base = params_list.front();
  detail::require(base.topology == Topology::Cycle ||
                      base.topology == Topology::Path,
                  "sample_coupled: cycle or path only");
  for (std::size_t i = 0; i < params_list.size(); ++i) {
    const auto& p = params_list[i];
    p.validate();
    detail::require(p.topology == base.topology && p.n == base.n &&
                        p.s == base.s && p.seed == base.seed,
                    "sample_coupled: params must differ only in beta");
    detail::require(i == 0 || params_list[i - 1].beta <= p.beta,
                    "sample_coupled: betas must be ascending");
  }
  const Vertex n = base.n;
  const bool cycle = base.topology == Topology::Cycle;
  const std::uint64_t key =
      mix3(base.seed, trial, static_cast<std::uint64_t>(StreamTag::Edges));
  const std::uint64_t max_d = cycle ? n / 2 : (n == 0 ? 0 : n - 1);

  std::vector<std::vector<double>> prob;
  for (const auto& p : params_list)
    prob.push_back(detail::distance_table(max_d, p.s, p.beta));

  std::vector<std::vector<std::pair<Vertex, Vertex>>> edges(params_list.size());
  for (auto& e : edges) detail::add_spine(base, e);
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = x + 1; y < n; ++y) {
      const std::uint64_t d = cycle ? ring_distance(x, y, n) : y - x;
      if (d < 2) continue;
      const double u = pair_uniform(key, x, y);
      // Probabilities are ascending in beta, so the open set is a suffix.
      for (std::size_t i = params_list.size(); i-- > 0;) {
        if (!(u < prob[i][d])) break;
        edges[i].emplace_back(x, y);
      }
    }
  std::vector<PercGraph> out;
  out.reserve(params_list.size());
  for (std::size_t i = 0; i < params_list.size(); ++i)
    out.emplace_back(params_list[i], n, edges[i]);
  return out;
}

/// Edge list CSV: header `u,v`, one row per undirected edge with u < v.
inline void write_edge_list(std::ostream& os, const PercGraph& g) {
  os << "u,v\n";
  for (auto [u, v] : g.edges()) os << u << ',' << v << '\n';
}

}  // namespace lrp
