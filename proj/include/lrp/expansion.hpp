#pragma once

// Expansion and transport: half-cut boundary, Cheeger constant (exhaustive
// and over arcs), effective resistance and total-variation mixing time.

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lrp/model.hpp"

namespace lrp {

enum class CutFamily { AllSubsets, Arcs, Half };

struct CutWitness {
  std::size_t set_size = 0;
  std::size_t boundary_size = 0;
  double ratio = 0.0;
  CutFamily family = CutFamily::AllSubsets;
  std::vector<Vertex> members;

  /// Strict comparison of boundary/size without rounding.
  bool better_than(std::size_t boundary, std::size_t size) const {
    return boundary * set_size < boundary_size * size;
  }
};

/// Edges between [0, n/2) and [n/2, n).
inline std::size_t half_boundary(const PercGraph& g) {
  if (g.params().topology != Topology::Cycle)
    throw std::invalid_argument("half_boundary: cycle topology required");
  const std::size_t n = g.vertex_count();
  if (n % 2 != 0 || n < 4)
    throw std::invalid_argument("half_boundary: n must be even and >= 4");
  const std::size_t h = n / 2;
  std::size_t crossing = 0;
  for (Vertex u = 0; u < h; ++u)
    for (Vertex v : g.neighbors(u))
      if (v >= h) ++crossing;
  return crossing;
}

namespace detail {
inline void require_half_params(const ModelParams& p) {
  if (p.topology != Topology::Cycle)
    throw std::invalid_argument("expected_half_boundary: cycle required");
  p.validate();
  if (p.n % 2 != 0 || p.n < 4)
    throw std::invalid_argument(
        "expected_half_boundary: n must be even and >= 4");
}
}  // namespace detail

/// E|boundary of [0, n/2)| by distance classes: 2d crossing pairs at ring
/// distance d < n/2 and n/2 antipodal ones.
inline double expected_half_boundary(const ModelParams& params) {
  detail::require_half_params(params);
  const std::uint64_t h = params.n / 2;
  double sum = 0.0;
  for (std::uint64_t d = 1; d < h; ++d)
    sum += 2.0 * static_cast<double>(d) *
           edge_probability(static_cast<std::int64_t>(d), params.s,
                            params.beta);
  sum += static_cast<double>(h) *
         edge_probability(static_cast<std::int64_t>(h), params.s, params.beta);
  return sum;
}

/// Same quantity by enumerating all crossing pairs. O(n^2).
inline double expected_half_boundary_pairs(const ModelParams& params) {
  detail::require_half_params(params);
  const std::uint64_t n = params.n, h = n / 2;
  std::vector<double> prob(h + 1, 0.0);
  for (std::uint64_t d = 1; d <= h; ++d)
    prob[d] = edge_probability(static_cast<std::int64_t>(d), params.s,
                               params.beta);
  double sum = 0.0;
  for (std::uint64_t i = 0; i < h; ++i)
    for (std::uint64_t j = h; j < n; ++j) sum += prob[ring_distance(i, j, n)];
  return sum;
}

inline constexpr std::size_t kCheegerExactMaxN = 20;

/// min |dA|/|A| over non-empty A with |A| <= n/2, by Gray-code enumeration.
inline CutWitness cheeger_exact(const PercGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n > kCheegerExactMaxN)
    throw std::invalid_argument("cheeger_exact: n must be <= 20");
  if (n < 2) throw std::invalid_argument("cheeger_exact: n must be >= 2");
  std::vector<std::uint32_t> adj(n, 0);
  for (Vertex v = 0; v < n; ++v)
    for (Vertex u : g.neighbors(v)) adj[v] |= 1u << u;

  CutWitness best;
  best.family = CutFamily::AllSubsets;
  std::uint32_t best_mask = 0;
  std::uint32_t set = 0;
  std::size_t size = 0, boundary = 0;
  const std::uint32_t total = 1u << n;
  for (std::uint32_t i = 1; i < total; ++i) {
    const int v = std::countr_zero(i);
    const std::uint32_t bit = 1u << v;
    const auto inside = static_cast<std::size_t>(
        std::popcount(adj[v] & (set & ~bit)));
    const std::size_t deg = g.degree(static_cast<Vertex>(v));
    if (set & bit) {
      set &= ~bit;
      --size;
      boundary = boundary + 2 * inside - deg;
    } else {
      set |= bit;
      ++size;
      boundary = boundary + deg - 2 * inside;
    }
    if (size == 0 || 2 * size > n) continue;
    if (best.set_size == 0 || best.better_than(boundary, size)) {
      best.set_size = size;
      best.boundary_size = boundary;
      best_mask = set;
    }
  }
  best.ratio = static_cast<double>(best.boundary_size) /
               static_cast<double>(best.set_size);
  for (Vertex v = 0; v < n; ++v)
    if (best_mask & (1u << v)) best.members.push_back(v);
  return best;
}

/// min |dA|/|A| over contiguous arcs A of the cycle, 1 <= |A| <= n/2. An
/// upper bound on the Cheeger constant. O(n^2 mean_degree / 2).
inline CutWitness cheeger_arc_upper(const PercGraph& g) {
  if (g.params().topology != Topology::Cycle)
    throw std::invalid_argument("cheeger_arc_upper: cycle topology required");
  const std::size_t n = g.vertex_count();
  if (n < 3) throw std::invalid_argument("cheeger_arc_upper: n must be >= 3");
  const std::size_t max_len = n / 2;
  CutWitness best;
  best.family = CutFamily::Arcs;
  std::size_t best_start = 0;
  for (std::size_t a = 0; a < n; ++a) {
    std::size_t boundary = 0;
    for (std::size_t len = 1; len <= max_len; ++len) {
      const auto v = static_cast<Vertex>((a + len - 1) % n);
      std::size_t inside = 0;
      for (Vertex w : g.neighbors(v))
        if ((w + n - a) % n < len - 1) ++inside;
      boundary = boundary + g.degree(v) - 2 * inside;
      if (best.set_size == 0 || best.better_than(boundary, len)) {
        best.set_size = len;
        best.boundary_size = boundary;
        best_start = a;
      }
    }
  }
  best.ratio = static_cast<double>(best.boundary_size) /
               static_cast<double>(best.set_size);
  for (std::size_t i = 0; i < best.set_size; ++i)
    best.members.push_back(static_cast<Vertex>((best_start + i) % n));
  return best;
}

/// Witness for the half cut [0, n/2).
inline CutWitness half_cut(const PercGraph& g) {
  CutWitness w;
  w.family = CutFamily::Half;
  w.boundary_size = half_boundary(g);
  w.set_size = g.vertex_count() / 2;
  w.ratio = static_cast<double>(w.boundary_size) /
            static_cast<double>(w.set_size);
  for (Vertex v = 0; v < w.set_size; ++v) w.members.push_back(v);
  return w;
}

/// Effective resistances with unit conductances. The Laplacian is grounded at
/// the last vertex and factored once; each query is one solve.
class ResistanceSolver {
 public:
  /// Graphs up to this size use sparse Cholesky; larger ones use
  /// Jacobi-preconditioned conjugate gradients.
  static constexpr std::size_t kDirectMaxN = 4096;
  static constexpr double kIterativeTolerance = 1e-10;

  explicit ResistanceSolver(const PercGraph& g) : n_(g.vertex_count()) {
    if (n_ < 2)
      throw std::invalid_argument("ResistanceSolver: need at least 2 vertices");
    const auto m = static_cast<Eigen::Index>(n_ - 1);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(2 * g.edge_count() + n_);
    for (Vertex u = 0; u + 1 < n_; ++u) {
      trip.emplace_back(u, u, static_cast<double>(g.degree(u)));
      for (Vertex v : g.neighbors(u))
        if (v + 1 < n_) trip.emplace_back(u, v, -1.0);
    }
    laplacian_.resize(m, m);
    laplacian_.setFromTriplets(trip.begin(), trip.end());
    if (n_ <= kDirectMaxN) {
      direct_ = std::make_unique<Direct>(laplacian_);
      if (direct_->info() != Eigen::Success)
        throw std::runtime_error("ResistanceSolver: graph is disconnected");
    } else {
      iterative_ = std::make_unique<Iterative>();
      iterative_->setTolerance(kIterativeTolerance);
      iterative_->setMaxIterations(static_cast<Eigen::Index>(10 * n_));
      iterative_->compute(laplacian_);
    }
  }

  double resistance(Vertex u, Vertex v) const {
    if (u == v) throw std::invalid_argument("resistance: u == v");
    if (u >= n_ || v >= n_) throw std::out_of_range("resistance: bad vertex");
    const Vertex ground = static_cast<Vertex>(n_ - 1);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(
        static_cast<Eigen::Index>(n_ - 1));
    if (u != ground) rhs[u] += 1.0;
    if (v != ground) rhs[v] -= 1.0;
    Eigen::VectorXd x;
    if (direct_) {
      x = direct_->solve(rhs);
    } else {
      x = iterative_->solve(rhs);
      if (iterative_->info() != Eigen::Success)
        throw std::runtime_error("resistance: iterative solve did not converge");
    }
    const double xu = u == ground ? 0.0 : x[u];
    const double xv = v == ground ? 0.0 : x[v];
    return xu - xv;
  }

  bool is_direct() const { return direct_ != nullptr; }

 private:
  using Sparse = Eigen::SparseMatrix<double>;
  using Direct = Eigen::SimplicialLDLT<Sparse>;
  using Iterative =
      Eigen::ConjugateGradient<Sparse, Eigen::Lower | Eigen::Upper>;

  std::size_t n_;
  Sparse laplacian_;
  std::unique_ptr<Direct> direct_;
  std::unique_ptr<Iterative> iterative_;
};

inline double effective_resistance(const PercGraph& g, Vertex u, Vertex v) {
  return ResistanceSolver(g).resistance(u, v);
}

struct MixingResult {
  std::uint64_t steps = 0;  // first t with TV < threshold, or the cap
  bool censored = false;    // cap reached without crossing the threshold
  bool tv_monotone = true;
  double final_tv = 0.0;
};

/// Lazy simple random walk (hold 1/2) started at vertex 0, evolved exactly.
/// TV is measured against the degree-proportional stationary law.
inline MixingResult mixing_time_tv(const PercGraph& g, double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0))
    throw std::invalid_argument("mixing_time_tv: threshold must be in (0,1)");
  const std::size_t n = g.vertex_count();
  MixingResult out;
  if (n <= 1) return out;
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  std::vector<double> pi(n), p(n, 0.0), next(n), flow(n);
  for (Vertex v = 0; v < n; ++v) {
    if (g.degree(v) == 0)
      throw std::runtime_error("mixing_time_tv: graph is disconnected");
    pi[v] = static_cast<double>(g.degree(v)) / two_m;
  }
  p[0] = 1.0;
  auto tv = [&] {
    double acc = 0.0;
    for (std::size_t v = 0; v < n; ++v) acc += std::abs(p[v] - pi[v]);
    return acc / 2.0;
  };
  const std::uint64_t cap = 10ULL * n * n;
  double current = tv();
  // Slack for summation rounding in the monotonicity check.
  constexpr double kSlack = 1e-12;
  for (std::uint64_t t = 0;; ++t) {
    if (current < threshold) {
      out.steps = t;
      out.final_tv = current;
      return out;
    }
    if (t == cap) break;
    for (Vertex u = 0; u < n; ++u)
      flow[u] = p[u] / (2.0 * static_cast<double>(g.degree(u)));
    for (Vertex v = 0; v < n; ++v) {
      double acc = p[v] / 2.0;
      for (Vertex u : g.neighbors(v)) acc += flow[u];
      next[v] = acc;
    }
    p.swap(next);
    const double updated = tv();
    if (updated > current + kSlack) out.tv_monotone = false;
    current = updated;
  }
  out.steps = cap;
  out.censored = true;
  out.final_tv = current;
  return out;
}

}  // namespace lrp
