#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "lrp/metrics.hpp"
#include "lrp/model.hpp"
#include "lrp/oracle.hpp"
#include "test_support.hpp"

namespace {

using namespace lrp;
using lrp::testing::Welford;

ModelParams cycle(std::uint32_t n, double s, double beta, std::uint64_t seed = 1) {
  return {Topology::Cycle, n, s, beta, seed, 1};
}
ModelParams path(std::uint32_t n, double s, double beta, std::uint64_t seed = 1) {
  return {Topology::Path, n, s, beta, seed, 1};
}
ModelParams box(std::uint32_t n, int dim, double s, std::uint64_t seed = 1) {
  return {Topology::Box, n, s, 0.0, seed, dim};
}

TEST(RingDistance, Examples) {
  EXPECT_EQ(ring_distance(0, 5, 8), 3u);
  EXPECT_EQ(ring_distance(2, 2, 10), 0u);
  EXPECT_EQ(ring_distance(0, 4, 8), 4u);
}

TEST(RingDistance, Properties) {
  for (std::uint64_t n = 1; n <= 17; ++n)
    for (std::uint64_t x = 0; x < n; ++x)
      for (std::uint64_t y = 0; y < n; ++y) {
        const auto d = ring_distance(x, y, n);
        ASSERT_EQ(d, ring_distance(y, x, n));
        ASSERT_EQ(d == 0, x == y);
        ASSERT_LE(d, n / 2);
      }
}

TEST(EdgeProbability, Examples) {
  EXPECT_EQ(edge_probability(2, 1.7, 0.0), 0.0);
  EXPECT_EQ(edge_probability(1, 3.0, 0.0), 1.0);
  EXPECT_EQ(edge_probability(1, 0.5, 9.0), 1.0);
  EXPECT_NEAR(edge_probability(2, 2.0, 1.0), 0.221199216928595131754829733, 1e-15);
  EXPECT_THROW(edge_probability(0, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(edge_probability(-3, 1.0, 1.0), std::invalid_argument);
}

TEST(EdgeProbability, Monotone) {
  for (double s : {0.5, 1.0, 1.5, 3.0})
    for (std::int64_t d = 2; d < 200; ++d) {
      ASSERT_LE(edge_probability(d + 1, s, 1.0), edge_probability(d, s, 1.0));
      ASSERT_LE(edge_probability(d, s, 0.5), edge_probability(d, s, 2.0));
    }
}

TEST(ModelParams, Validation) {
  EXPECT_THROW(cycle(0, 1, 1).validate(), std::invalid_argument);
  EXPECT_THROW(cycle(5, 0, 1).validate(), std::invalid_argument);
  EXPECT_THROW(cycle(5, 1, -1).validate(), std::invalid_argument);
  EXPECT_THROW(box(5, 3, 0.5).validate(), std::invalid_argument);
  EXPECT_THROW(box(5, 1, 1.0).validate(), std::invalid_argument);
  EXPECT_NO_THROW(box(5, 2, 1.5).validate());
}

TEST(CycleNaive, BareCycle) {
  Stream rng(1);
  const auto g = sample_cycle_naive(cycle(10, 2, 0), rng);
  EXPECT_EQ(g.edge_count(), 10u);
  for (Vertex v = 0; v < 10; ++v) EXPECT_EQ(g.degree(v), 2u);
  EXPECT_TRUE(g.check_invariants());
}

TEST(CycleNaive, TriangleAndDegenerateSizes) {
  Stream rng(1);
  const auto tri = sample_cycle_naive(cycle(3, 5, 0.1), rng);
  EXPECT_EQ(tri.edge_count(), 3u);
  EXPECT_EQ(sample_cycle_naive(cycle(1, 2, 1), rng).edge_count(), 0u);
  const auto two = sample_cycle_naive(cycle(2, 2, 1), rng);
  EXPECT_EQ(two.edge_count(), 1u);
  EXPECT_TRUE(two.check_invariants());
}

TEST(CycleNaive, MeanEdgeCountMatchesPairSum) {
  const auto p = cycle(100, 1.5, 1.0);
  const double expected = oracle::expected_edges(p);
  Welford w;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    Stream rng = derive_stream(11, t, StreamTag::Test);
    w.add(double(sample_cycle_naive(p, rng).edge_count()));
  }
  EXPECT_NEAR(w.mean, expected, 3 * w.standard_error());
}

TEST(CycleStratified, BareCycleMatchesNaive) {
  Stream a(5), b(5);
  const auto p = cycle(40, 1.5, 0.0);
  EXPECT_EQ(sample_cycle_stratified(p, a).edges(), sample_cycle_naive(p, b).edges());
}

// Per-distance-class open counts; class d holds the pairs at ring distance d.
std::vector<double> class_counts(const PercGraph& g) {
  const auto n = g.vertex_count();
  std::vector<double> c(n / 2 + 1, 0.0);
  for (auto [u, v] : g.edges()) c[ring_distance(u, v, n)] += 1.0;
  return c;
}

TEST(CycleStratified, PerClassMeansWithinFourSigma) {
  const std::uint32_t n = 32;
  const auto p = cycle(n, 1.5, 1.0);
  std::vector<Welford> acc(n / 2 + 1);
  for (std::uint64_t t = 0; t < 10000; ++t) {
    Stream rng = derive_stream(3, t, StreamTag::Test);
    const auto c = class_counts(sample_cycle_stratified(p, rng));
    for (std::size_t d = 2; d <= n / 2; ++d) acc[d].add(c[d]);
  }
  for (std::uint32_t d = 2; d <= n / 2; ++d) {
    const double size = 2 * d == n ? n / 2 : n;
    const double q = edge_probability(d, 1.5, 1.0);
    const double sigma = std::sqrt(size * q * (1 - q) / 10000.0);
    EXPECT_NEAR(acc[d].mean, size * q, 4 * sigma) << "class " << d;
  }
}

std::uint32_t config_code(const PercGraph& g) {
  // Bit i marks the i-th long pair (lexicographic) as open.
  std::uint32_t code = 0;
  int bit = 0;
  const auto n = g.vertex_count();
  for (Vertex x = 0; x < n; ++x)
    for (Vertex y = x + 1; y < n; ++y) {
      if (ring_distance(x, y, n) < 2) continue;
      if (g.has_edge(x, y)) code |= 1u << bit;
      ++bit;
    }
  return code;
}

TEST(CycleStratified, ConfigurationLawMatchesNaive) {
  const auto p = cycle(6, 1.0, 2.0);
  const int draws = 100000;
  std::vector<double> naive(512, 0.0), strat(512, 0.0);
  for (int t = 0; t < draws; ++t) {
    Stream a = derive_stream(21, t, StreamTag::Test);
    Stream b = derive_stream(22, t, StreamTag::Test);
    naive[config_code(sample_cycle_naive(p, a))] += 1.0;
    strat[config_code(sample_cycle_stratified(p, b))] += 1.0;
  }
  const auto [stat, dof] = lrp::testing::chi2_two_sample(naive, strat);
  EXPECT_LT(stat, lrp::testing::chi2_critical(dof)) << "dof=" << dof;
}

TEST(CycleStratified, LargeDenseSampleIsValid) {
  Stream rng(8);
  const auto g = sample_cycle_stratified(cycle(2048, 0.5, 1.0), rng);
  EXPECT_TRUE(g.check_invariants());
  EXPECT_EQ(diameter_bounds(g, 1).lower > 0, true);
}

TEST(Path, Examples) {
  Stream rng(1);
  EXPECT_EQ(sample_path(path(10, 2, 0), rng).edge_count(), 9u);
  const auto two = sample_path(path(2, 2, 5), rng);
  EXPECT_EQ(two.edge_count(), 1u);
  EXPECT_THROW(sample_path(cycle(10, 2, 0), rng), std::invalid_argument);
}

TEST(Path, MeanLongEdgeCount) {
  const auto p = path(64, 3.0, 1.0);
  const double expected_long = oracle::expected_edges(p) - 63.0;
  Welford strat, naive;
  for (std::uint64_t t = 0; t < 20000; ++t) {
    Stream a = derive_stream(31, t, StreamTag::Test);
    Stream b = derive_stream(32, t, StreamTag::Test);
    strat.add(double(sample_path(p, a).edge_count()) - 63.0);
    naive.add(double(sample_path_naive(p, b).edge_count()) - 63.0);
  }
  EXPECT_NEAR(strat.mean, expected_long, 3 * strat.standard_error());
  EXPECT_NEAR(naive.mean, expected_long, 3 * naive.standard_error());
}

TEST(Box, Examples) {
  Stream rng(1);
  EXPECT_EQ(sample_box(box(2, 1, 0.5), rng).edge_count(), 1u);
  EXPECT_NEAR(box_edge_probability(4, 0.5), 0.5, 1e-15);
  EXPECT_THROW(sample_box(box(8, 1, 1.0), rng), std::invalid_argument);
  EXPECT_THROW(sample_box(box(8, 2, 2.5), rng), std::invalid_argument);
}

TEST(Box, OneDimensionalDistanceFourFrequency) {
  const auto p = box(6, 1, 0.5);
  int open = 0;
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    Stream rng = derive_stream(41, t, StreamTag::Test);
    const auto g = sample_box(p, rng);
    open += g.has_edge(0, 4) + g.has_edge(1, 5);
  }
  const double freq = open / (2.0 * trials);
  EXPECT_NEAR(freq, 0.5, 4 * std::sqrt(0.25 / (2.0 * trials)));
}

TEST(Box, TwoDimensionalMeanLongEdges) {
  const auto p = box(4, 2, 1.0);
  const double lattice = 2 * 4 * 3;
  const double expected_long = oracle::expected_edges(p) - lattice;
  Welford w;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    Stream rng = derive_stream(51, t, StreamTag::Test);
    const auto g = sample_box(p, rng);
    ASSERT_TRUE(g.check_invariants());
    w.add(double(g.edge_count()) - lattice);
  }
  EXPECT_NEAR(w.mean, expected_long, 3 * w.standard_error());
}

TEST(Box, LatticeEdgesPresent) {
  Stream rng(3);
  const auto g = sample_box(box(5, 2, 1.2), rng);
  for (Vertex r = 0; r < 5; ++r)
    for (Vertex c = 0; c < 5; ++c) {
      if (c + 1 < 5) {
        EXPECT_TRUE(g.has_edge(r * 5 + c, r * 5 + c + 1));
      }
      if (r + 1 < 5) {
        EXPECT_TRUE(g.has_edge(r * 5 + c, (r + 1) * 5 + c));
      }
    }
}

TEST(Samples, InvariantsAcrossTopologies) {
  for (std::uint64_t t = 0; t < 30; ++t) {
    for (const auto& p : {cycle(3 + t * 7, 1.2, 1.5), path(2 + t * 5, 2.5, 2.0),
                          box(1 + t, 1, 0.7), box(1 + t / 4, 2, 1.5)}) {
      const auto g = sample_trial(p, t);
      ASSERT_TRUE(g.check_invariants());
      if (p.topology == Topology::Cycle && p.n >= 3) {
        for (Vertex v = 0; v < p.n; ++v) {
          ASSERT_TRUE(g.has_edge(v, (v + 1) % p.n));
          ASSERT_GE(g.degree(v), 2u);
        }
        ASSERT_NO_THROW(eccentricity(g, 0));
      }
      if (p.topology != Topology::Cycle && p.dim == 1) {
        for (Vertex v = 0; v + 1 < p.n; ++v) ASSERT_TRUE(g.has_edge(v, v + 1));
      }
    }
  }
}

TEST(Samples, DeterministicPerTrial) {
  const auto p = cycle(500, 1.3, 1.0, 77);
  EXPECT_EQ(sample_trial(p, 4).edges(), sample_trial(p, 4).edges());
  EXPECT_NE(sample_trial(p, 4).edges(), sample_trial(p, 5).edges());
}

TEST(Coupled, Examples) {
  auto a = cycle(64, 1.5, 0.0, 3), b = cycle(64, 1.5, 1.0, 3);
  const auto gs = sample_coupled({a, b}, 0);
  EXPECT_EQ(gs[0].edge_count(), 64u);
  for (auto [u, v] : gs[0].edges()) EXPECT_TRUE(gs[1].has_edge(u, v));

  const auto same = sample_coupled({b, b}, 9);
  EXPECT_EQ(same[0].edges(), same[1].edges());
}

TEST(Coupled, RejectsMismatch) {
  EXPECT_THROW(sample_coupled({cycle(10, 1.5, 1), cycle(12, 1.5, 2)}, 0),
               std::invalid_argument);
  EXPECT_THROW(sample_coupled({cycle(10, 1.5, 1), cycle(10, 1.6, 2)}, 0),
               std::invalid_argument);
  EXPECT_THROW(sample_coupled({cycle(10, 1.5, 2), cycle(10, 1.5, 1)}, 0),
               std::invalid_argument);
  EXPECT_THROW(sample_coupled({cycle(10, 1.5, 1), path(10, 1.5, 2)}, 0),
               std::invalid_argument);
}

TEST(Coupled, MarginalMatchesLaw) {
  const auto p = cycle(100, 1.5, 1.0);
  const double expected = oracle::expected_edges(p);
  Welford w;
  for (std::uint64_t t = 0; t < 4000; ++t)
    w.add(double(sample_coupled({p}, t)[0].edge_count()));
  EXPECT_NEAR(w.mean, expected, 3 * w.standard_error());
}

TEST(Coupled, NestedAndDiameterAntiMonotone) {
  for (std::uint64_t t = 0; t < 100; ++t) {
    const auto gs = sample_coupled({cycle(256, 1.5, 0.5, 17), cycle(256, 1.5, 2.0, 17)}, t);
    for (auto [u, v] : gs[0].edges()) ASSERT_TRUE(gs[1].has_edge(u, v));
    ASSERT_LE(diameter_exact(gs[1]), diameter_exact(gs[0]));
  }
}

TEST(EdgeList, CsvFormat) {
  std::ostringstream os;
  write_edge_list(os, sample_trial(cycle(4, 2, 0), 0));
  EXPECT_EQ(os.str(), "u,v\n0,1\n0,3\n1,2\n2,3\n");
}

}  // namespace
