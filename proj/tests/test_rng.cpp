#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "lrp/binomial.hpp"
#include "lrp/rng.hpp"
#include "test_support.hpp"

namespace {

using lrp::derive_stream;
using lrp::Stream;
using lrp::StreamTag;

TEST(Rng, SameKeySameStream) {
  Stream a = derive_stream(42, 7, StreamTag::Edges);
  Stream b = derive_stream(42, 7, StreamTag::Edges);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(Rng, FrozenFirstDraws) {
  // Pins the derivation; changing it silently changes every persisted sample.
  Stream a = derive_stream(1, 0, StreamTag::Edges);
  EXPECT_EQ(a(), 8333632336983285968ULL);
  EXPECT_EQ(a(), 3612793638864890849ULL);
}

TEST(Rng, DistinctTagsShareNoPrefix) {
  // Any 64-bit word from one stream showing up in the first 4096 words of
  // another would indicate overlapping sequences.
  std::set<std::uint64_t> seen;
  for (auto tag : {StreamTag::Edges, StreamTag::ResistancePairs, StreamTag::Generic}) {
    for (std::uint64_t trial = 0; trial < 8; ++trial) {
      Stream s = derive_stream(99, trial, tag);
      for (int i = 0; i < 4096; ++i) ASSERT_TRUE(seen.insert(s()).second);
    }
  }
}

TEST(Rng, DistinctTagsAreUncorrelated) {
  Stream a = derive_stream(5, 0, StreamTag::Edges);
  Stream b = derive_stream(5, 0, StreamTag::ResistancePairs);
  const int n = 200000;
  double sab = 0.0, sa = 0.0, sb = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = a.uniform(), y = b.uniform();
    sab += x * y;
    sa += x;
    sb += y;
  }
  const double cov = sab / n - (sa / n) * (sb / n);
  // sd of the covariance estimate is (1/12)/sqrt(n) ~ 1.9e-4
  EXPECT_LT(std::abs(cov), 5 * (1.0 / 12.0) / std::sqrt(double(n)));
}

TEST(Rng, UniformRangeAndMean) {
  Stream s(123);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 5 * std::sqrt(1.0 / 12.0 / 100000));
}

TEST(Rng, BelowIsUniform) {
  Stream s(9);
  std::vector<double> counts(7, 0.0);
  for (int i = 0; i < 70000; ++i) counts[s.below(7)] += 1.0;
  double chi = 0.0;
  for (double c : counts) chi += (c - 10000.0) * (c - 10000.0) / 10000.0;
  EXPECT_LT(chi, lrp::testing::chi2_critical(6));
}

TEST(Rng, PairUniformIsSymmetricAndKeyed) {
  EXPECT_EQ(lrp::pair_uniform(3, 10, 20), lrp::pair_uniform(3, 20, 10));
  EXPECT_NE(lrp::pair_uniform(3, 10, 20), lrp::pair_uniform(4, 10, 20));
  EXPECT_NE(lrp::pair_uniform(3, 10, 20), lrp::pair_uniform(3, 10, 21));
}

// Exact pmf via lgamma, used as the oracle for the binomial sampler.
double binomial_pmf(std::uint64_t n, double p, std::uint64_t k) {
  const double nd = double(n), kd = double(k);
  return std::exp(std::lgamma(nd + 1) - std::lgamma(kd + 1) - std::lgamma(nd - kd + 1) +
                  kd * std::log(p) + (nd - kd) * std::log1p(-p));
}

void check_binomial(std::uint64_t n, double p, int draws) {
  Stream s(n * 1000003 + static_cast<std::uint64_t>(p * 1e6));
  std::vector<double> counts(n + 1, 0.0);
  for (int i = 0; i < draws; ++i) {
    const auto k = lrp::sample_binomial(n, p, s);
    ASSERT_LE(k, n);
    counts[k] += 1.0;
  }
  // Pool tail cells until every expected count is at least 5.
  double chi = 0.0, pooled_obs = 0.0, pooled_exp = 0.0;
  int cells = 0;
  for (std::uint64_t k = 0; k <= n; ++k) {
    pooled_obs += counts[k];
    pooled_exp += binomial_pmf(n, p, k) * draws;
    if (pooled_exp >= 5.0) {
      chi += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
      pooled_obs = pooled_exp = 0.0;
      ++cells;
    }
  }
  if (pooled_exp > 0.0) {
    chi += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / std::max(pooled_exp, 1e-9);
    ++cells;
  }
  EXPECT_LT(chi, lrp::testing::chi2_critical(cells - 1))
      << "n=" << n << " p=" << p << " cells=" << cells;
}

TEST(Binomial, InversionRegimeMatchesPmf) {
  check_binomial(20, 0.3, 200000);
  check_binomial(1000, 0.01, 200000);
}

TEST(Binomial, RejectionRegimeMatchesPmf) {
  check_binomial(100, 0.45, 200000);
  check_binomial(5000, 0.02, 200000);
  check_binomial(100000, 0.3, 200000);
}

TEST(Binomial, FlippedAndDegenerate) {
  Stream s(1);
  EXPECT_EQ(lrp::sample_binomial(0, 0.5, s), 0u);
  EXPECT_EQ(lrp::sample_binomial(10, 0.0, s), 0u);
  EXPECT_EQ(lrp::sample_binomial(10, 1.0, s), 10u);
  check_binomial(200, 0.9, 100000);
  EXPECT_THROW(lrp::sample_binomial(10, 1.5, s), std::invalid_argument);
}

TEST(Binomial, MeanAndVarianceLargeN) {
  Stream s(77);
  lrp::testing::Welford w;
  const std::uint64_t n = 1000000;
  const double p = 0.001;  // mean 1000, BTRD path
  for (int i = 0; i < 20000; ++i) w.add(double(lrp::sample_binomial(n, p, s)));
  EXPECT_NEAR(w.mean, n * p, 4 * w.standard_error());
  EXPECT_NEAR(w.variance(), n * p * (1 - p), 0.05 * n * p);
}

}  // namespace
