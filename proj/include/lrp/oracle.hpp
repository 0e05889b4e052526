#pragma once

// Independent brute-force oracles for small instances. These share no code
// path with the production algorithms they check: distances come from
// Floyd-Warshall on a dense matrix, cuts are recounted from the edge list for
// every subset, and expectations are summed pair by pair.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lrp/model.hpp"

namespace lrp::oracle {

inline std::vector<std::vector<std::uint32_t>> floyd_warshall(
    const PercGraph& g) {
  const std::size_t n = g.vertex_count();
  constexpr std::uint32_t inf = std::numeric_limits<std::uint32_t>::max() / 4;
  std::vector<std::vector<std::uint32_t>> d(n, std::vector<std::uint32_t>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (auto [u, v] : g.edges()) d[u][v] = d[v][u] = 1;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

inline std::uint32_t diameter(const PercGraph& g) {
  std::uint32_t best = 0;
  for (const auto& row : floyd_warshall(g))
    for (auto x : row) best = std::max(best, x);
  return best;
}

struct Ratio {
  std::size_t boundary = 0;
  std::size_t size = 0;
  double value() const {
    return static_cast<double>(boundary) / static_cast<double>(size);
  }
};

/// min |dA|/|A| over all non-empty A with |A| <= n/2, boundary recounted from
/// the edge list for every subset.
inline Ratio cheeger(const PercGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n < 2 || n > 24) throw std::invalid_argument("oracle::cheeger: bad n");
  const auto edges = g.edges();
  Ratio best{0, 0};
  for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
    std::size_t size = 0;
    for (std::size_t v = 0; v < n; ++v) size += (mask >> v) & 1;
    if (2 * size > n) continue;
    std::size_t boundary = 0;
    for (auto [u, v] : edges)
      boundary += ((mask >> u) & 1) != ((mask >> v) & 1);
    if (best.size == 0 || boundary * best.size < best.boundary * size)
      best = {boundary, size};
  }
  return best;
}

/// Minimum over contiguous cycle arcs, each boundary recounted from scratch.
inline Ratio arc_cheeger(const PercGraph& g) {
  const std::size_t n = g.vertex_count();
  const auto edges = g.edges();
  Ratio best{0, 0};
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t len = 1; len <= n / 2; ++len) {
      auto in = [&](std::size_t v) { return (v + n - a) % n < len; };
      std::size_t boundary = 0;
      for (auto [u, v] : edges) boundary += in(u) != in(v);
      if (best.size == 0 || boundary * best.size < best.boundary * len)
        best = {boundary, len};
    }
  return best;
}

/// Expected edge count by summing the open probability of every pair.
inline double expected_edges(const ModelParams& p) {
  const std::size_t count = p.vertex_count();
  double sum = 0.0;
  for (std::size_t x = 0; x < count; ++x)
    for (std::size_t y = x + 1; y < count; ++y) {
      std::int64_t d = 0;
      switch (p.topology) {
        case Topology::Cycle: {
          const std::size_t diff = y - x;
          d = static_cast<std::int64_t>(std::min(diff, count - diff));
          break;
        }
        case Topology::Path:
          d = static_cast<std::int64_t>(y - x);
          break;
        case Topology::Box:
          if (p.dim == 1) {
            d = static_cast<std::int64_t>(y - x);
          } else {
            const auto n = static_cast<std::int64_t>(p.n);
            const auto xi = static_cast<std::int64_t>(x);
            const auto yi = static_cast<std::int64_t>(y);
            d = std::abs(xi / n - yi / n) + std::abs(xi % n - yi % n);
          }
          break;
      }
      if (p.topology == Topology::Box)
        sum += std::min(1.0, std::pow(static_cast<double>(d), -p.s));
      else
        sum += d == 1 ? 1.0
                      : 1.0 - std::exp(-p.beta * std::pow(static_cast<double>(d), -p.s));
    }
  return sum;
}

/// Dense Gaussian elimination on the grounded Laplacian.
inline double resistance(const PercGraph& g, Vertex u, Vertex v) {
  const std::size_t n = g.vertex_count();
  // Ground v; unknowns are the other n-1 potentials.
  std::vector<std::size_t> index(n, n);
  std::size_t m = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (i != v) index[i] = m++;
  std::vector<std::vector<double>> a(m, std::vector<double>(m + 1, 0.0));
  for (auto [x, y] : g.edges()) {
    for (auto [p, q] : {std::pair{x, y}, std::pair{y, x}}) {
      if (index[p] == n) continue;
      a[index[p]][index[p]] += 1.0;
      if (index[q] != n) a[index[p]][index[q]] -= 1.0;
    }
  }
  a[index[u]][m] = 1.0;
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c || a[r][c] == 0.0) continue;
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k <= m; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return a[index[u]][m] / a[index[u]][index[u]];
}

}  // namespace lrp::oracle
