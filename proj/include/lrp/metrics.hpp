#pragma once

// Distance measurements: BFS eccentricities, exact and bounded diameters, cut
// points of the path model and the analytic cut density.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lrp/model.hpp"

namespace lrp {

inline constexpr std::uint32_t kUnreached =
    std::numeric_limits<std::uint32_t>::max();

struct BfsResult {
  std::vector<std::uint32_t> dist;
  std::uint32_t eccentricity = 0;
  Vertex farthest = 0;  // lowest id among the farthest vertices
  std::size_t reached = 0;
};

inline BfsResult bfs(const PercGraph& g, Vertex source) {
  const std::size_t n = g.vertex_count();
  if (source >= n) throw std::out_of_range("bfs: source out of range");
  BfsResult r;
  r.dist.assign(n, kUnreached);
  std::vector<Vertex> queue;
  queue.reserve(n);
  queue.push_back(source);
  r.dist[source] = 0;
  r.farthest = source;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex u = queue[head];
    const std::uint32_t du = r.dist[u];
    for (Vertex v : g.neighbors(u)) {
      if (r.dist[v] != kUnreached) continue;
      r.dist[v] = du + 1;
      queue.push_back(v);
      if (du + 1 > r.eccentricity ||
          (du + 1 == r.eccentricity && v < r.farthest)) {
        r.eccentricity = du + 1;
        r.farthest = v;
      }
    }
  }
  r.reached = queue.size();
  return r;
}

inline std::uint32_t eccentricity(const PercGraph& g, Vertex v) {
  const BfsResult r = bfs(g, v);
  if (r.reached != g.vertex_count())
    throw std::runtime_error("eccentricity: graph is disconnected");
  return r.eccentricity;
}

/// One BFS per vertex. O(n (n + m)).
inline std::uint32_t diameter_all_pairs_bfs(const PercGraph& g) {
  std::uint32_t diam = 0;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    diam = std::max(diam, eccentricity(g, v));
  return diam;
}

/// 64 sources per pass with bitmask frontiers; each level costs O(n + m), so
/// a pass costs O(ecc (n + m)). Wins when the diameter is small.
inline std::uint32_t diameter_bit_parallel(const PercGraph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::uint64_t> visited(n), frontier(n), next(n);
  std::uint32_t diam = 0;
  for (std::size_t base = 0; base < n; base += 64) {
    const std::size_t width = std::min<std::size_t>(64, n - base);
    const std::uint64_t full =
        width == 64 ? ~0ULL : ((1ULL << width) - 1);
    std::fill(visited.begin(), visited.end(), 0);
    std::fill(frontier.begin(), frontier.end(), 0);
    for (std::size_t i = 0; i < width; ++i)
      visited[base + i] = frontier[base + i] = 1ULL << i;
    std::uint32_t level = 0;
    for (;;) {
      bool any = false;
      for (Vertex v = 0; v < n; ++v) {
        std::uint64_t acc = 0;
        for (Vertex u : g.neighbors(v)) acc |= frontier[u];
        acc &= ~visited[v];
        next[v] = acc;
        any |= acc != 0;
      }
      if (!any) break;
      ++level;
      for (std::size_t v = 0; v < n; ++v) visited[v] |= next[v];
      frontier.swap(next);
    }
    for (std::size_t v = 0; v < n; ++v)
      if (visited[v] != full)
        throw std::runtime_error("diameter: graph is disconnected");
    diam = std::max(diam, level);
  }
  return diam;
}

/// Exact diameter. Picks the bit-parallel sweep when a cheap upper bound says
/// the diameter is small, plain all-pairs BFS otherwise.
inline std::uint32_t diameter_exact(const PercGraph& g) {
  if (g.vertex_count() <= 1) return 0;
  const std::uint32_t upper = 2 * eccentricity(g, 0);
  if (upper <= 48) return diameter_bit_parallel(g);
  return diameter_all_pairs_bfs(g);
}

struct DiameterBounds {
  std::uint32_t lower = 0;
  std::uint32_t upper = 0;
};

/// Repeated double sweep. Each round runs BFS from the current start, then
/// from the farthest vertex found; the next start is the midpoint of that
/// second sweep's longest path (or its far end once midpoints repeat).
inline DiameterBounds diameter_bounds(const PercGraph& g, int sweeps) {
  if (sweeps < 1)
    throw std::invalid_argument("diameter_bounds: sweeps must be >= 1");
  const std::size_t n = g.vertex_count();
  if (n <= 1) return {0, 0};
  DiameterBounds b{0, std::numeric_limits<std::uint32_t>::max()};
  std::vector<char> used(n, 0);
  Vertex start = 0;
  for (int round = 0; round < sweeps; ++round) {
    used[start] = 1;
    const BfsResult first = bfs(g, start);
    if (first.reached != n)
      throw std::runtime_error("diameter_bounds: graph is disconnected");
    b.lower = std::max(b.lower, first.eccentricity);
    b.upper = std::min(b.upper, 2 * first.eccentricity);
    const Vertex a = first.farthest;
    const BfsResult second = bfs(g, a);
    b.lower = std::max(b.lower, second.eccentricity);
    b.upper = std::min(b.upper, 2 * second.eccentricity);
    if (b.lower == b.upper) break;

    // Walk back from the far end to the midpoint of the a -> far path.
    Vertex cur = second.farthest;
    const std::uint32_t half = second.eccentricity / 2;
    while (second.dist[cur] > half) {
      Vertex step = cur;
      for (Vertex u : g.neighbors(cur))
        if (second.dist[u] + 1 == second.dist[cur]) {
          step = u;
          break;
        }
      cur = step;
    }
    if (!used[cur]) {
      start = cur;
    } else if (!used[second.farthest]) {
      start = second.farthest;
    } else {
      break;
    }
  }
  return b;
}

/// Interior vertices x0 of a path sample with no edge (x, y), x < x0 < y.
inline std::vector<Vertex> cut_points(const PercGraph& g) {
  if (g.params().topology != Topology::Path)
    throw std::invalid_argument("cut_points: path topology required");
  const std::size_t n = g.vertex_count();
  std::vector<Vertex> cuts;
  std::uint64_t reach = 0;  // max endpoint of edges leaving [0, x0)
  for (Vertex x0 = 0; x0 < n; ++x0) {
    if (x0 > 0 && x0 + 1 < n && reach <= x0) cuts.push_back(x0);
    auto nb = g.neighbors(x0);
    if (!nb.empty()) reach = std::max<std::uint64_t>(reach, nb.back());
  }
  return cuts;
}

struct CutDensity {
  std::size_t cuts = 0;
  std::size_t window = 0;
  double density() const {
    return window == 0 ? 0.0
                       : static_cast<double>(cuts) / static_cast<double>(window);
  }
};

/// Cut density over the vertices at distance >= n/4 from both ends.
inline CutDensity cut_density(const PercGraph& g) {
  const std::size_t n = g.vertex_count();
  const std::size_t margin = std::max<std::size_t>(1, n / 4);
  CutDensity out;
  if (n < 2 * margin + 1) return out;
  const std::size_t lo = margin, hi = n - 1 - margin;  // inclusive
  out.window = hi - lo + 1;
  for (Vertex c : cut_points(g))
    if (c >= lo && c <= hi) ++out.cuts;
  return out;
}

struct PsiResult {
  double exact = 0.0;        // P(fixed point of Z is a cut)
  double loose_bound = 0.0;  // exp(-beta sum_{k>=1} k^{1-s})
  double tail_bound = 0.0;   // abs error bound on both values
  std::uint64_t terms = 0;
};

namespace detail {

// sum_{k >= from} f(k): explicit terms below K, Euler-Maclaurin tail from K
// on. f must be convex and decreasing on [K, inf) with |f'| decreasing; the
// remainder is then at most |f'(K)| / 12.
template <class F, class Integral, class Deriv>
std::pair<double, double> series_with_tail(std::uint64_t from, std::uint64_t K,
                                           F f, Integral tail_integral,
                                           Deriv fprime) {
  double sum = 0.0;
  for (std::uint64_t k = K; k-- > from;) sum += f(static_cast<double>(k));
  const double Kd = static_cast<double>(K);
  sum += tail_integral(Kd) + f(Kd) / 2.0 - fprime(Kd) / 12.0;
  return {sum, std::abs(fprime(Kd)) / 12.0};
}

}  // namespace detail

/// Cut density of the infinite line. exact uses the k-1 straddling pairs at
/// span k; loose_bound uses k pairs at every span k >= 1 and is smaller.
inline PsiResult psi_cut_density(double s, double beta, double tol = 1e-12) {
  if (!(s > 2.0))
    throw std::domain_error("psi_cut_density: requires s > 2 (density is 0)");
  if (!(beta >= 0.0))
    throw std::invalid_argument("psi_cut_density: beta must be >= 0");
  if (!(tol > 0.0))
    throw std::invalid_argument("psi_cut_density: tol must be > 0");
  PsiResult out;
  if (beta == 0.0) {
    out.exact = out.loose_bound = 1.0;
    return out;
  }
  auto f = [s](double x) { return std::pow(x, 1.0 - s) - std::pow(x, -s); };
  auto fi = [s](double x) {
    return std::pow(x, 2.0 - s) / (s - 2.0) - std::pow(x, 1.0 - s) / (s - 1.0);
  };
  auto fp = [s](double x) {
    return (1.0 - s) * std::pow(x, -s) + s * std::pow(x, -s - 1.0);
  };
  auto g = [s](double x) { return std::pow(x, 1.0 - s); };
  auto gi = [s](double x) { return std::pow(x, 2.0 - s) / (s - 2.0); };
  auto gp = [s](double x) { return (1.0 - s) * std::pow(x, -s); };

  std::uint64_t K = 16;
  constexpr std::uint64_t kMaxTerms = 1ULL << 26;
  while (K < kMaxTerms &&
         beta * std::max(std::abs(fp(double(K))), std::abs(gp(double(K)))) /
                 12.0 >=
             tol)
    K *= 2;
  const auto [sf, ef] = detail::series_with_tail(2, K, f, fi, fp);
  const auto [sg, eg] = detail::series_with_tail(1, K, g, gi, gp);
  out.exact = std::exp(-beta * sf);
  out.loose_bound = std::exp(-beta * sg);
  // |d exp(-beta x)| <= beta exp(-beta x) dx, with slack for the exp itself.
  out.tail_bound = beta * std::max(ef * out.exact, eg * out.loose_bound) *
                   (1.0 + 1e-6);
  out.terms = K;
  return out;
}

/// Expected degree of a cycle vertex.
inline double expected_degree(const ModelParams& params) {
  if (params.topology != Topology::Cycle)
    throw std::invalid_argument("expected_degree: cycle topology required");
  params.validate();
  const std::uint64_t n = params.n;
  if (n == 1) return 0.0;
  if (n == 2) return 1.0;
  double sum = 2.0;
  for (std::uint64_t d = 2; d <= n / 2; ++d) {
    const double c = (2 * d == n) ? 1.0 : 2.0;
    sum += c * edge_probability(static_cast<std::int64_t>(d), params.s,
                                params.beta);
  }
  return sum;
}

struct DegreeStats {
  double mean = 0.0;
  std::size_t max = 0;
  std::vector<std::size_t> histogram;  // histogram[k] = #vertices of degree k
};

inline DegreeStats degree_stats(const PercGraph& g) {
  DegreeStats st;
  const std::size_t n = g.vertex_count();
  for (Vertex v = 0; v < n; ++v) st.max = std::max(st.max, g.degree(v));
  st.histogram.assign(st.max + 1, 0);
  for (Vertex v = 0; v < n; ++v) ++st.histogram[g.degree(v)];
  st.mean = n == 0 ? 0.0
                   : 2.0 * static_cast<double>(g.edge_count()) /
                         static_cast<double>(n);
  return st;
}

}  // namespace lrp
