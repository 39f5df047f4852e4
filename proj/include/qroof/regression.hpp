// Copyright 2026 The qroof Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Ordinary least squares for degree 1 and 2 polynomials, and the harness that
// compares BOPS against compute cost as area predictors.

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qroof/netmodel.hpp"

namespace qroof {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct FitResult {
  int degree = 1;
  std::vector<double> coefficients;  // highest degree first
  double r_squared = 0.0;
  std::vector<double> residuals;  // y - p(x), in input order
  double max_rel_error = 0.0;

  double operator()(double x) const {
    double acc = 0.0;
    for (double c : coefficients) acc = acc * x + c;
    return acc;
  }
};

namespace detail {

// Solves the (d+1)x(d+1) system in place with partial pivoting.
template <std::size_t N>
std::array<double, N> solve(std::array<std::array<double, N>, N> a, std::array<double, N> b) {
  for (std::size_t col = 0; col < N; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < N; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-300) throw ValidationError("fit: singular normal equations");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = col + 1; r < N; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < N; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::array<double, N> x{};
  for (std::size_t i = N; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < N; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  return x;
}

// Coefficients (lowest first) in the standardized variable t = (x - mean) / scale.
template <std::size_t N>
std::array<double, N> fit_standardized(std::span<const Point2> pts, double mean, double scale) {
  std::array<std::array<double, N>, N> ata{};
  std::array<double, N> aty{};
  for (const auto& p : pts) {
    const double t = (p.x - mean) / scale;
    std::array<double, N> row{};
    double v = 1.0;
    for (std::size_t i = 0; i < N; ++i, v *= t) row[i] = v;
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) ata[i][j] += row[i] * row[j];
      aty[i] += row[i] * p.y;
    }
  }
  return solve<N>(ata, aty);
}

}  // namespace detail

inline FitResult fit(std::span<const Point2> pts, int degree) {
  if (degree != 1 && degree != 2) {
    throw ValidationError(fmt::format("fit: degree must be 1 or 2, got {}", degree));
  }
  if (pts.size() < static_cast<std::size_t>(degree) + 2) {
    throw ValidationError(fmt::format("fit: degree {} needs at least {} points, got {}", degree,
                                      degree + 2, pts.size()));
  }
  std::set<double> distinct_x;
  for (const auto& p : pts) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ValidationError("fit: non-finite point");
    distinct_x.insert(p.x);
  }
  if (distinct_x.size() < static_cast<std::size_t>(degree) + 1) {
    throw ValidationError(fmt::format("fit: degree {} needs at least {} distinct x values", degree,
                                      degree + 1));
  }

  double mean = 0.0;
  for (const auto& p : pts) mean += p.x;
  mean /= static_cast<double>(pts.size());
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, std::abs(p.x - mean));

  // Expand c0 + c1 t + c2 t^2 with t = (x - mean) / scale back into powers of x.
  FitResult r;
  r.degree = degree;
  if (degree == 1) {
    const auto c = detail::fit_standardized<2>(pts, mean, scale);
    const double a1 = c[1] / scale;
    r.coefficients = {a1, c[0] - a1 * mean};
  } else {
    const auto c = detail::fit_standardized<3>(pts, mean, scale);
    const double s2 = scale * scale;
    const double a2 = c[2] / s2;
    const double a1 = c[1] / scale - 2.0 * c[2] * mean / s2;
    const double a0 = c[0] - c[1] * mean / scale + c[2] * mean * mean / s2;
    r.coefficients = {a2, a1, a0};
  }

  double y_mean = 0.0;
  for (const auto& p : pts) y_mean += p.y;
  y_mean /= static_cast<double>(pts.size());
  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (const auto& p : pts) {
    const double res = p.y - r(p.x);
    r.residuals.push_back(res);
    ss_res += res * res;
    ss_tot += (p.y - y_mean) * (p.y - y_mean);
    if (p.y != 0.0) r.max_rel_error = std::max(r.max_rel_error, std::abs(res / p.y));
  }
  if (ss_tot > 0.0) {
    r.r_squared = std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0);
  } else {
    r.r_squared = ss_res == 0.0 ? 1.0 : 0.0;
  }
  return r;
}

inline FitResult fit(const std::vector<Point2>& pts, int degree) {
  return fit(std::span<const Point2>(pts), degree);
}

// ---------------------------------------------------------------------------
// BOPS vs compute cost
// ---------------------------------------------------------------------------

struct AreaSample {
  Layer config;  // n, m, k, b_w, b_a are used
  double area = 0.0;
};

enum class MetricVerdict { bops, compute_cost, indistinguishable };

constexpr std::string_view to_string(MetricVerdict v) {
  switch (v) {
    case MetricVerdict::bops: return "bops";
    case MetricVerdict::compute_cost: return "compute_cost";
    case MetricVerdict::indistinguishable: return "indistinguishable";
  }
  return "?";
}

struct MetricComparison {
  FitResult bops_fit;
  FitResult cc_fit;
  double bops_max_loo_error = 0.0;
  double cc_max_loo_error = 0.0;
  MetricVerdict verdict = MetricVerdict::indistinguishable;
};

// Largest relative error when each point is predicted by a line fitted to
// all the others.
inline double max_leave_one_out_error(std::span<const Point2> pts) {
  double worst = 0.0;
  std::vector<Point2> rest;
  rest.reserve(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    rest.clear();
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j != i) rest.push_back(pts[j]);
    }
    const auto f = fit(rest, 1);
    const double err = std::abs(f(pts[i].x) - pts[i].y) / std::abs(pts[i].y);
    worst = std::max(worst, err);
  }
  return worst;
}

// Max errors closer than this (relative, or absolute below the floor) do not
// pick a winner.
inline constexpr double kVerdictTolerance = 1e-9;
inline constexpr double kVerdictFloor = 1e-12;

inline MetricComparison compare_metrics(std::span<const AreaSample> samples) {
  if (samples.size() < 4) {
    throw ValidationError(
        fmt::format("compare_metrics: needs at least 4 samples, got {}", samples.size()));
  }
  std::vector<Point2> by_bops;
  std::vector<Point2> by_cc;
  std::set<std::pair<Count, Count>> groups;
  for (const auto& s : samples) {
    validate(s.config);
    if (!(s.area > 0.0)) throw ValidationError("compare_metrics: areas must be > 0");
    by_bops.push_back({static_cast<double>(layer_bops(s.config)), s.area});
    by_cc.push_back({static_cast<double>(compute_cost(s.config)), s.area});
    groups.emplace(s.config.n, s.config.m);
  }
  MetricComparison out;
  out.bops_fit = fit(by_bops, 1);
  out.cc_fit = fit(by_cc, 1);
  out.bops_max_loo_error = max_leave_one_out_error(by_bops);
  out.cc_max_loo_error = max_leave_one_out_error(by_cc);
  const double scale = std::max(out.bops_max_loo_error, out.cc_max_loo_error);
  const double gap = std::abs(out.bops_max_loo_error - out.cc_max_loo_error);
  if (groups.size() < 2 || gap <= std::max(kVerdictTolerance * scale, kVerdictFloor)) {
    out.verdict = MetricVerdict::indistinguishable;
  } else {
    out.verdict = out.bops_max_loo_error < out.cc_max_loo_error ? MetricVerdict::bops
                                                                : MetricVerdict::compute_cost;
  }
  return out;
}

inline MetricComparison compare_metrics(const std::vector<AreaSample>& samples) {
  return compare_metrics(std::span<const AreaSample>(samples));
}

}  // namespace qroof
