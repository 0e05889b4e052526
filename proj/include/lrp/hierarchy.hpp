#pragma once

// Renormalization hierarchy on the path [0, N_k): nested tilings by
// components of each degree, interval attachment, and the event that every
// component's sub-components are pairwise attached.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lrp/model.hpp"

namespace lrp {

/// Half-open vertex interval [begin, end).
struct Interval {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;

  std::uint64_t length() const { return end - begin; }
  bool contains(std::uint64_t x) const { return x >= begin && x < end; }
  bool overlaps(const Interval& o) const {
    return begin < o.end && o.begin < end;
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Branching factors C_1..C_k. A component of degree j is an interval of
/// length N_j = C_1 ... C_j and splits into C_j components of degree j - 1.
class HierarchySpec {
 public:
  static constexpr std::uint64_t kMaxVertices = 0xffffffffULL;

  explicit HierarchySpec(std::vector<std::uint64_t> branching)
      : branching_(std::move(branching)) {
    if (branching_.empty())
      throw std::invalid_argument("HierarchySpec: need at least one level");
    sizes_.push_back(1);
    for (std::uint64_t c : branching_) {
      if (c < 2) throw std::invalid_argument("HierarchySpec: C_i must be >= 2");
      if (sizes_.back() > kMaxVertices / c)
        throw std::overflow_error("HierarchySpec: N_k exceeds vertex range");
      sizes_.push_back(sizes_.back() * c);
    }
  }

  /// C_i = round(exp(alpha^i)), i = 1..k.
  static HierarchySpec exponential(double alpha, int k) {
    if (!(alpha > 1.0))
      throw std::invalid_argument("HierarchySpec: alpha must be > 1");
    if (k < 1) throw std::invalid_argument("HierarchySpec: k must be >= 1");
    std::vector<std::uint64_t> c;
    for (int i = 1; i <= k; ++i) {
      const double v = std::round(std::exp(std::pow(alpha, i)));
      if (!(v <= static_cast<double>(kMaxVertices)))
        throw std::overflow_error("HierarchySpec: C_i exceeds vertex range");
      c.push_back(static_cast<std::uint64_t>(v));
    }
    return HierarchySpec(std::move(c));
  }

  int levels() const { return static_cast<int>(branching_.size()); }
  /// C_j for j in [1, levels()].
  std::uint64_t branching(int j) const { return branching_.at(j - 1); }
  /// N_j for j in [0, levels()]; N_0 = 1.
  std::uint64_t size(int j) const { return sizes_.at(j); }
  std::uint64_t total() const { return sizes_.back(); }

 private:
  std::vector<std::uint64_t> branching_;
  std::vector<std::uint64_t> sizes_;
};

/// levels[j] lists the N_k / N_j components of degree j, left to right.
inline std::vector<std::vector<Interval>> build_levels(
    const HierarchySpec& spec) {
  std::vector<std::vector<Interval>> levels(spec.levels() + 1);
  for (int j = 0; j <= spec.levels(); ++j) {
    const std::uint64_t len = spec.size(j);
    for (std::uint64_t b = 0; b < spec.total(); b += len)
      levels[j].push_back({b, b + len});
  }
  return levels;
}

/// True iff some edge joins a vertex of I to a vertex of J.
inline bool intervals_attached(const PercGraph& g, const Interval& I,
                               const Interval& J) {
  if (I.overlaps(J))
    throw std::invalid_argument("intervals_attached: intervals overlap");
  if (I.end > g.vertex_count() || J.end > g.vertex_count())
    throw std::out_of_range("intervals_attached: interval outside graph");
  const Interval& scan = I.length() <= J.length() ? I : J;
  const Interval& target = I.length() <= J.length() ? J : I;
  for (std::uint64_t x = scan.begin; x < scan.end; ++x) {
    auto nb = g.neighbors(static_cast<Vertex>(x));
    auto it = std::lower_bound(nb.begin(), nb.end(), target.begin);
    if (it != nb.end() && *it < target.end) return true;
  }
  return false;
}

/// Intervals I = [0, L), J ending at span*L so the farthest pair of
/// endpoints is exactly span*L apart. Requires span*L >= 2L - 1.
inline std::pair<Interval, Interval> span_interval_pair(std::uint64_t L,
                                                        double span) {
  const auto far = static_cast<std::uint64_t>(
      std::llround(span * static_cast<double>(L)));
  if (L < 1 || far + 1 < 2 * L)
    throw std::invalid_argument("span_interval_pair: intervals would overlap");
  return {Interval{0, L}, Interval{far + 1 - L, far + 1}};
}

namespace detail {
inline double attachment_bound_unchecked(double L, double l, double s,
                                         double beta) {
  return -std::expm1(-0.5 * beta * std::pow(L, 2.0 - s) * std::pow(l, -s));
}
}  // namespace detail

/// 1 - exp(-(beta L^{2-s} / 2) l^{-s}): lower bound on the probability that
/// two length-L intervals whose farthest endpoints are l*L apart are attached.
inline double attachment_prob_bound(std::uint64_t L, double l, double s,
                                    double beta) {
  if (L < 1) throw std::invalid_argument("attachment_prob_bound: L >= 1");
  if (!(l >= 1.0)) throw std::invalid_argument("attachment_prob_bound: l >= 1");
  if (!(s > 1.0 && s < 2.0))
    throw std::domain_error("attachment_prob_bound: requires 1 < s < 2");
  if (!(beta >= 0.0))
    throw std::invalid_argument("attachment_prob_bound: beta >= 0");
  return detail::attachment_bound_unchecked(static_cast<double>(L), l, s, beta);
}

/// Pairwise attachment flags among the sub-components of one component.
class AttachmentMatrix {
 public:
  AttachmentMatrix(const PercGraph& g, const Interval& component,
                   std::uint64_t sub_length)
      : count_(component.length() / sub_length),
        flags_(count_ * count_, 0) {
    for (std::uint64_t x = component.begin; x < component.end; ++x) {
      const std::uint64_t a = (x - component.begin) / sub_length;
      for (Vertex y : g.neighbors(static_cast<Vertex>(x))) {
        if (y <= x || y >= component.end) continue;
        const std::uint64_t b = (y - component.begin) / sub_length;
        if (a != b) flags_[a * count_ + b] = flags_[b * count_ + a] = 1;
      }
    }
  }

  std::uint64_t size() const { return count_; }
  bool attached(std::uint64_t a, std::uint64_t b) const {
    return flags_[a * count_ + b] != 0;
  }
  /// Lexicographically first unattached pair, if any.
  std::optional<std::pair<std::uint64_t, std::uint64_t>> first_gap() const {
    for (std::uint64_t a = 0; a < count_; ++a)
      for (std::uint64_t b = a + 1; b < count_; ++b)
        if (!attached(a, b)) return std::pair{a, b};
    return std::nullopt;
  }
  std::uint64_t gaps() const {
    std::uint64_t c = 0;
    for (std::uint64_t a = 0; a < count_; ++a)
      for (std::uint64_t b = a + 1; b < count_; ++b) c += !attached(a, b);
    return c;
  }

 private:
  std::uint64_t count_;
  std::vector<char> flags_;
};

struct DegreeRange {
  int lo = 1;
  int hi = 1;
};

struct NuFailure {
  int degree = 0;
  std::uint64_t component = 0;
  std::uint64_t sub_a = 0;
  std::uint64_t sub_b = 0;
};

struct NuResult {
  bool holds = true;
  std::optional<NuFailure> first_failure;
};

namespace detail {
inline void check_nu_args(const PercGraph& g, const HierarchySpec& spec,
                          DegreeRange range) {
  if (g.vertex_count() != spec.total())
    throw std::invalid_argument("check_nu_event: graph length != N_k");
  if (range.lo < 1 || range.hi > spec.levels() || range.lo > range.hi)
    throw std::invalid_argument("check_nu_event: bad degree range");
}
}  // namespace detail

/// Whether, for every degree j in [lo, hi], every degree-j component has all
/// of its degree-(j-1) sub-components pairwise attached. The reported
/// failure is the one with the lowest degree, then component, then pair.
inline NuResult check_nu_event(const PercGraph& g, const HierarchySpec& spec,
                               DegreeRange range) {
  detail::check_nu_args(g, spec, range);
  for (int j = range.lo; j <= range.hi; ++j) {
    const std::uint64_t len = spec.size(j), sub = spec.size(j - 1);
    for (std::uint64_t c = 0; c * len < spec.total(); ++c) {
      const AttachmentMatrix m(g, {c * len, (c + 1) * len}, sub);
      if (auto gap = m.first_gap())
        return {false, NuFailure{j, c, gap->first, gap->second}};
    }
  }
  return {};
}

struct NuCensusRow {
  int degree = 0;
  std::uint64_t components = 0;
  std::uint64_t failing_components = 0;
  std::uint64_t unattached_pairs = 0;
};

/// Per-degree failure counts over the whole range (no early exit).
inline std::vector<NuCensusRow> nu_census(const PercGraph& g,
                                          const HierarchySpec& spec,
                                          DegreeRange range) {
  detail::check_nu_args(g, spec, range);
  std::vector<NuCensusRow> rows;
  for (int j = range.lo; j <= range.hi; ++j) {
    NuCensusRow row{j, 0, 0, 0};
    const std::uint64_t len = spec.size(j), sub = spec.size(j - 1);
    for (std::uint64_t c = 0; c * len < spec.total(); ++c) {
      const AttachmentMatrix m(g, {c * len, (c + 1) * len}, sub);
      const std::uint64_t gaps = m.gaps();
      ++row.components;
      row.failing_components += gaps > 0;
      row.unattached_pairs += gaps;
    }
    rows.push_back(row);
  }
  return rows;
}

/// 2^(hi-lo+1) N_(lo-1). Under the event on [lo, hi], any two vertices of a
/// degree-hi component are joined by a path shorter than this: a component
/// of degree j has diameter at most 2 D_(j-1) + 1, and a degree-(lo-1) one
/// at most N_(lo-1) - 1 along the spine.
inline std::uint64_t nu_diameter_bound(const HierarchySpec& spec,
                                       DegreeRange range) {
  if (range.lo < 1 || range.hi > spec.levels() || range.lo > range.hi)
    throw std::invalid_argument("nu_diameter_bound: bad degree range");
  return (std::uint64_t{1} << (range.hi - range.lo + 1)) *
         spec.size(range.lo - 1);
}

/// 1 - sum_j (#degree-j components) * binom(C_j, 2) *
/// exp(-(beta N_(j-1)^{2-s} / 2) C_j^{-s}). May be negative.
inline double nu_union_bound(const HierarchySpec& spec, DegreeRange range,
                             double s, double beta) {
  if (range.lo < 1 || range.hi > spec.levels() || range.lo > range.hi)
    throw std::invalid_argument("nu_union_bound: bad degree range");
  double miss = 0.0;
  for (int j = range.lo; j <= range.hi; ++j) {
    const double comps =
        static_cast<double>(spec.total() / spec.size(j));
    const double c = static_cast<double>(spec.branching(j));
    const double fail =
        1.0 - detail::attachment_bound_unchecked(
                  static_cast<double>(spec.size(j - 1)), c, s, beta);
    miss += comps * c * (c - 1.0) / 2.0 * fail;
  }
  return 1.0 - miss;
}

}  // namespace lrp
