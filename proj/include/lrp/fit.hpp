#pragma once

// Scaling-law fits over per-n medians and the diameter regime classifier.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "lrp/stats.hpp"
#include "lrp/sweep_row.hpp"

namespace lrp {

enum class FitModel {
  PowerLaw,  // log y against log n
  PolyLog,   // log y against log log n
  Constant,  // y against log n; a flat line means bounded
};

enum class Regime { Linear, PolyLogarithmic, Bounded, Inconclusive };

inline std::string_view to_string(FitModel m) {
  switch (m) {
    case FitModel::PowerLaw: return "PowerLaw";
    case FitModel::PolyLog: return "PolyLog";
    case FitModel::Constant: return "Constant";
  }
  return "?";
}

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Linear: return "Linear";
    case Regime::PolyLogarithmic: return "PolyLogarithmic";
    case Regime::Bounded: return "Bounded";
    case Regime::Inconclusive: return "Inconclusive";
  }
  return "?";
}

struct ScalingPoint {
  double n = 0.0;
  double median = 0.0;
};

struct FitResult {
  FitModel model = FitModel::PowerLaw;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int n_points = 0;
  Regime regime_label = Regime::Inconclusive;
  std::vector<ScalingPoint> points;  // ascending n
};

/// Classifier thresholds. The defaults are the calibrated values; sweep
/// configs may override them.
struct RegimeThresholds {
  double linear_min_slope = 0.9;
  double linear_min_r2 = 0.98;
  double polylog_min_r2 = 0.9;
};

/// Per-n medians of `column`, ascending in n. Null cells are skipped.
inline std::vector<ScalingPoint> median_points(const std::vector<SweepRow>& rows,
                                               std::string_view column) {
  std::map<std::uint32_t, std::vector<double>> by_n;
  for (const auto& r : rows)
    if (auto v = column_value(r, column)) by_n[r.n].push_back(*v);
  std::vector<ScalingPoint> pts;
  for (auto& [n, ys] : by_n)
    pts.push_back({static_cast<double>(n), stats::median(std::move(ys))});
  return pts;
}

inline FitResult fit_points(std::vector<ScalingPoint> pts, FitModel model) {
  if (pts.size() < 3)
    throw std::invalid_argument("fit_scaling: need >= 3 distinct n values");
  std::vector<double> x, y;
  for (const auto& p : pts) {
    if (!(p.n > 1.0))
      throw std::invalid_argument("fit_scaling: n must exceed 1");
    switch (model) {
      case FitModel::PowerLaw:
        x.push_back(std::log(p.n));
        break;
      case FitModel::PolyLog:
        if (!(p.n > std::exp(1.0)))
          throw std::invalid_argument("fit_scaling: PolyLog needs n > e");
        x.push_back(std::log(std::log(p.n)));
        break;
      case FitModel::Constant:
        x.push_back(std::log(p.n));
        break;
    }
    if (model == FitModel::Constant) {
      y.push_back(p.median);
    } else {
      if (!(p.median > 0.0))
        throw std::invalid_argument("fit_scaling: log fit of non-positive y");
      y.push_back(std::log(p.median));
    }
  }
  const stats::LineFit lf = stats::ols(x, y);
  FitResult f;
  f.model = model;
  f.slope = lf.slope;
  f.intercept = lf.intercept;
  f.r_squared = lf.r_squared;
  f.n_points = static_cast<int>(pts.size());
  f.points = std::move(pts);
  return f;
}

/// OLS on transformed per-n medians. Rows must share topology, s and beta.
inline FitResult fit_scaling(const std::vector<SweepRow>& rows,
                             std::string_view column, FitModel model) {
  for (const auto& r : rows)
    if (r.topology != rows.front().topology || r.s != rows.front().s ||
        r.beta != rows.front().beta || r.dim != rows.front().dim)
      throw std::invalid_argument("fit_scaling: rows mix parameter cells");
  return fit_points(median_points(rows, column), model);
}

/// Log-log slopes over consecutive windows of `window` points.
inline std::vector<double> windowed_slopes(const std::vector<ScalingPoint>& pts,
                                           std::size_t window) {
  if (window < 2) throw std::invalid_argument("windowed_slopes: window < 2");
  std::vector<double> out;
  for (std::size_t i = 0; i + window <= pts.size(); ++i) {
    std::vector<double> x, y;
    for (std::size_t j = i; j < i + window; ++j) {
      x.push_back(std::log(pts[j].n));
      y.push_back(std::log(pts[j].median));
    }
    out.push_back(stats::ols(x, y).slope);
  }
  return out;
}

/// Window used by the classifier's downward-trend test.
inline std::size_t trend_window(std::size_t points) {
  return std::max<std::size_t>(3, (points + 1) / 2);
}

/// Medians non-increasing over the top half of the n values.
inline bool non_increasing_top_half(const std::vector<ScalingPoint>& pts) {
  const std::size_t start = pts.size() / 2;
  for (std::size_t i = start + 1; i < pts.size(); ++i)
    if (pts[i].median > pts[i - 1].median) return false;
  return true;
}

inline Regime classify_regime(const std::vector<FitResult>& fits,
                              const RegimeThresholds& th = {}) {
  const FitResult* power = nullptr;
  const FitResult* polylog = nullptr;
  for (const auto& f : fits) {
    if (f.model == FitModel::PowerLaw) power = &f;
    if (f.model == FitModel::PolyLog) polylog = &f;
  }
  if (!power || !polylog)
    throw std::invalid_argument("classify_regime: need PowerLaw and PolyLog fits");
  if (power->slope >= th.linear_min_slope && power->r_squared >= th.linear_min_r2)
    return Regime::Linear;
  if (non_increasing_top_half(power->points)) return Regime::Bounded;
  const auto slopes = windowed_slopes(power->points, trend_window(power->points.size()));
  const bool downward = slopes.size() >= 2 && slopes.back() < slopes.front();
  if (downward && polylog->r_squared >= th.polylog_min_r2)
    return Regime::PolyLogarithmic;
  return Regime::Inconclusive;
}

/// Fits all three models on one cell's rows and labels each with the
/// classifier's verdict.
inline std::vector<FitResult> fit_all(const std::vector<SweepRow>& rows,
                                      std::string_view column,
                                      const RegimeThresholds& th = {}) {
  std::vector<FitResult> fits{fit_scaling(rows, column, FitModel::PowerLaw),
                              fit_scaling(rows, column, FitModel::PolyLog),
                              fit_scaling(rows, column, FitModel::Constant)};
  const Regime r = classify_regime(fits, th);
  for (auto& f : fits) f.regime_label = r;
  return fits;
}

}  // namespace lrp
