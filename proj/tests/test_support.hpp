#pragma once

#include <cmath>
#include <vector>

namespace lrp::testing {

/// Upper-tail chi-square critical value via Wilson-Hilferty; z is the
/// standard-normal quantile of the level (3.090 for 0.001).
inline double chi2_critical(double dof, double z = 3.090) {
  const double a = 2.0 / (9.0 * dof);
  const double t = 1.0 - a + z * std::sqrt(a);
  return dof * t * t * t;
}

/// Two-sample chi-square statistic for count vectors over the same cells.
/// Cells empty in both samples are skipped; returns {statistic, dof}.
inline std::pair<double, double> chi2_two_sample(const std::vector<double>& a,
                                                 const std::vector<double>& b) {
  double na = 0.0, nb = 0.0;
  for (double x : a) na += x;
  for (double x : b) nb += x;
  const double ka = std::sqrt(nb / na), kb = std::sqrt(na / nb);
  double stat = 0.0;
  int cells = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] + b[i] == 0.0) continue;
    const double d = ka * a[i] - kb * b[i];
    stat += d * d / (a[i] + b[i]);
    ++cells;
  }
  return {stat, static_cast<double>(cells - 1)};
}

struct Welford {
  double n = 0.0, mean = 0.0, m2 = 0.0;
  void add(double x) {
    n += 1.0;
    const double d = x - mean;
    mean += d / n;
    m2 += d * (x - mean);
  }
  double variance() const { return n > 1.0 ? m2 / (n - 1.0) : 0.0; }
  double standard_error() const { return std::sqrt(variance() / n); }
};

}  // namespace lrp::testing
