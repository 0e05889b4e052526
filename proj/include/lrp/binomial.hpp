#pragma once

// Exact Binomial(trials, p) variates driven by a Stream.
//
// Small means use sequential inversion. Larger means use Hoermann's BTRD
// (transformed rejection with decomposition), which is exact and needs O(1)
// expected uniforms.

#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "lrp/rng.hpp"

namespace lrp {

namespace detail {

// log(k!) - [(k + 1/2) log(k + 1) - (k + 1) + log(2 pi)/2]
inline double stirling_tail(std::uint64_t k) noexcept {
  static constexpr double table[10] = {
      0.08106146679532726, 0.04134069595540929, 0.02767792568499834,
      0.02079067210376509, 0.01664469118982119, 0.01387612882307075,
      0.01189670994589177, 0.01041126526197209, 0.009255462182712733,
      0.008330563433362871};
  if (k < 10) return table[k];
  const double kp1 = static_cast<double>(k) + 1.0;
  const double r = 1.0 / (kp1 * kp1);
  return (1.0 / 12.0 - (1.0 / 360.0 - r / 1260.0) * r) / kp1;
}

inline std::uint64_t binomial_inversion(std::uint64_t n, double p,
                                        Stream& rng) {
  const double q = 1.0 - p;
  const double ratio = p / q;
  double pmf = std::pow(q, static_cast<double>(n));
  double u = rng.uniform();
  std::uint64_t k = 0;
  while (u > pmf) {
    u -= pmf;
    if (k == n) {
      // Accumulated rounding left a sliver of mass; restart is exact in law.
      u = rng.uniform();
      k = 0;
      pmf = std::pow(q, static_cast<double>(n));
      continue;
    }
    pmf *= ratio * static_cast<double>(n - k) / static_cast<double>(k + 1);
    ++k;
  }
  return k;
}

inline std::uint64_t binomial_btrd(std::uint64_t n, double p, Stream& rng) {
  const double nd = static_cast<double>(n);
  const double q = 1.0 - p;
  const double spq = std::sqrt(nd * p * q);
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = nd * p + 0.5;
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double v_r = 0.92 - 4.2 / b;
  const double u_rv_r = 0.86 * v_r;
  const auto m = static_cast<std::uint64_t>(std::floor((nd + 1.0) * p));
  const double r = p / q;
  const double nr = (nd + 1.0) * r;
  const double npq = nd * p * q;
  const double md = static_cast<double>(m);

  for (;;) {
    double v = rng.uniform();
    double u;
    if (v <= u_rv_r) {
      u = v / v_r - 0.43;
      const double k = std::floor((2.0 * a / (0.5 - std::abs(u)) + b) * u + c);
      if (k >= 0.0 && k <= nd) return static_cast<std::uint64_t>(k);
      continue;
    }
    if (v >= v_r) {
      u = rng.uniform() - 0.5;
    } else {
      u = v / v_r - 0.93;
      u = std::copysign(0.5, u) - u;
      v = rng.uniform() * v_r;
    }
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + c);
    if (kf < 0.0 || kf > nd) continue;
    const auto k = static_cast<std::uint64_t>(kf);
    v = v * alpha / (a / (us * us) + b);
    const std::uint64_t km = k > m ? k - m : m - k;

    if (km <= 15) {
      double f = 1.0;
      if (m < k) {
        for (std::uint64_t i = m + 1; i <= k; ++i)
          f *= nr / static_cast<double>(i) - r;
      } else if (m > k) {
        for (std::uint64_t i = k + 1; i <= m; ++i)
          v *= nr / static_cast<double>(i) - r;
      }
      if (v <= f) return k;
      continue;
    }

    v = std::log(v);
    const double kmd = static_cast<double>(km);
    const double rho =
        (kmd / npq) * (((kmd / 3.0 + 0.625) * kmd + 1.0 / 6.0) / npq + 0.5);
    const double t = -kmd * kmd / (2.0 * npq);
    if (v < t - rho) return k;
    if (v > t + rho) continue;

    const double nm = nd - md + 1.0;
    const double h = (md + 0.5) * std::log((md + 1.0) / (r * nm)) +
                     stirling_tail(m) + stirling_tail(n - m);
    const double nk = nd - kf + 1.0;
    if (v <= h + (nd + 1.0) * std::log(nm / nk) +
                 (kf + 0.5) * std::log(nk * r / (kf + 1.0)) -
                 stirling_tail(k) - stirling_tail(n - k))
      return k;
  }
}

}  // namespace detail

/// Mean threshold below which inversion is used.
inline constexpr double kBinomialInversionMean = 30.0;

inline std::uint64_t sample_binomial(std::uint64_t n, double p, Stream& rng) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("sample_binomial: p outside [0,1]");
  if (n == 0 || p == 0.0) return 0;
  if (p == 1.0) return n;
  if (p > 0.5) return n - sample_binomial(n, 1.0 - p, rng);
  if (static_cast<double>(n) * p < kBinomialInversionMean)
    return detail::binomial_inversion(n, p, rng);
  return detail::binomial_btrd(n, p, rng);
}

}  // namespace lrp
