/*
 *   Copyright 2026 The dilatox Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/**
 * @file
 *
 * Limits along a shrinking coefficient schedule eps_k = eps0 ratio^k.
 *
 * The convergence order p is the least-squares slope of log|v_k - v_{k+1}|
 * against log eps_k over the tail of the schedule. The limit is then taken
 * from a Richardson tableau eliminating eps^p, eps^{p+1}, ... and the entry
 * with the smallest change between consecutive rows wins, which keeps the
 * estimate away from the round-off dominated end of the schedule.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "dilatox/core.hpp"

namespace dilatox {

struct ToleranceSchedule {
  double eps0 = 1.0;
  double ratio = 0.5;
  int steps = 11;

  void validate() const {
    if (!(eps0 > 0.0 && eps0 <= 1.0)) throw Error(ErrorCode::DomainViolation, "schedule eps0 must be in (0, 1]");
    if (!(ratio > 0.0 && ratio < 1.0)) throw Error(ErrorCode::DomainViolation, "schedule ratio must be in (0, 1)");
    if (steps < 1) throw Error(ErrorCode::DomainViolation, "schedule needs at least one step");
  }

  std::vector<double> epsilons() const {
    validate();
    std::vector<double> e(static_cast<std::size_t>(steps));
    double v = eps0;
    for (auto& x : e) {
      x = v;
      v *= ratio;
    }
    return e;
  }

  friend bool operator==(const ToleranceSchedule&, const ToleranceSchedule&) = default;
};

struct LimitOptions {
  double tol = 1e-9;               ///< relative above unit scale
  int fit_points = 5;              ///< tail deviations used by the order fit
  double max_fit_residual = 0.1;   ///< rms of the log-log fit
  int max_levels = 4;              ///< Richardson columns beyond the raw samples
  int min_samples = 5;             ///< never cut the sequence shorter than this
  double noise_growth = 4.0;       ///< deviation growth that marks the round-off regime
};

template <typename T>
struct LimitEstimate {
  std::vector<double> eps;
  std::vector<T> values;
  T limit{};
  std::optional<double> order;  ///< empty when the tail is already constant
  std::size_t used_samples = 0; ///< leading samples used; the rest were round-off
  bool stationary = false;
  double error_estimate = 0.0;
  double fit_residual = 0.0;
  bool converged = false;
  std::string diagnostic;
};

namespace detail {

inline std::vector<double> as_coords(double v) { return {v}; }
inline std::vector<double> as_coords(const Point& p) { return p.vec(); }
inline void from_coords(const std::vector<double>& c, double& out) { out = c.at(0); }
inline void from_coords(const std::vector<double>& c, Point& out) { out = Point(c); }

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

struct LineFit {
  double slope = 0.0;
  double rms = 0.0;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (my + f.slope * (x[i] - mx));
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

}  // namespace detail

/// Extrapolate eps -> 0 from samples ordered by decreasing eps.
template <typename T>
LimitEstimate<T> extrapolate_limit(std::vector<double> eps, std::vector<T> values, const LimitOptions& opt = {}) {
  if (eps.size() != values.size() || eps.empty())
    throw Error(ErrorCode::DimensionMismatch, "limit samples and schedule differ in length");
  for (std::size_t k = 1; k < eps.size(); ++k)
    if (!(eps[k] < eps[k - 1])) throw Error(ErrorCode::DomainViolation, "schedule must be strictly decreasing");

  LimitEstimate<T> est;
  est.eps = std::move(eps);
  est.values = std::move(values);

  std::size_t n = est.values.size();
  std::vector<std::vector<double>> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = detail::as_coords(est.values[k]);

  double floor = opt.tol * std::max(1.0, detail::max_abs(v.back()));
  est.limit = est.values.back();
  est.used_samples = n;

  if (n < 3) {
    est.diagnostic = "schedule too short to judge convergence";
    return est;
  }

  std::vector<double> dev(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) dev[k] = detail::max_abs_diff(v[k], v[k + 1]);

  // Round-off grows as eps shrinks. Once a deviation above the floor exceeds
  // the smallest earlier one by noise_growth, the remaining samples are noise.
  const auto keep = static_cast<std::size_t>(std::max(opt.min_samples, 3));
  double smallest = dev[0];
  for (std::size_t k = 1; k < dev.size(); ++k) {
    if (k + 1 >= keep && dev[k] > floor && dev[k] > opt.noise_growth * smallest) {
      n = k + 1;
      v.resize(n);
      dev.resize(n - 1);
      floor = opt.tol * std::max(1.0, detail::max_abs(v.back()));
      est.limit = est.values[n - 1];
      est.used_samples = n;
      break;
    }
    smallest = std::min(smallest, dev[k]);
  }

  // Last three successive deviations must not increase, unless already below the floor.
  bool monotone = true;
  for (std::size_t k = dev.size() >= 3 ? dev.size() - 2 : 1; k < dev.size(); ++k)
    if (dev[k] > floor && dev[k] > dev[k - 1] * (1.0 + 1e-12)) monotone = false;

  const double dev_max = *std::max_element(dev.begin(), dev.end());
  if (dev_max <= floor) {
    // Every sample is within the floor of every other; take the one next to
    // the smallest step, which carries the least round-off.
    const auto kmin = static_cast<std::size_t>(std::min_element(dev.begin(), dev.end()) - dev.begin());
    est.limit = est.values[kmin + 1];
    est.stationary = true;
    est.error_estimate = dev_max;
    est.converged = true;
    return est;
  }

  // Order fit over the last fit_points deviations that are still above the floor.
  std::vector<double> lx, ly;
  for (std::size_t k = dev.size(); k-- > 0 && lx.size() < static_cast<std::size_t>(opt.fit_points);)
    if (dev[k] > floor) {
      lx.push_back(std::log(est.eps[k]));
      ly.push_back(std::log(dev[k]));
    }
  if (lx.size() < 2) {
    // Settled below the floor after at most one visible step: no order to report.
    est.error_estimate = dev.back();
    est.converged = monotone && dev.back() <= floor;
    if (!est.converged) est.diagnostic = "too few deviations above the noise floor for an order fit";
    return est;
  }
  const detail::LineFit fit = detail::fit_line(lx, ly);
  est.order = fit.slope;
  est.fit_residual = fit.rms;
  if (fit.rms > opt.max_fit_residual) {
    est.diagnostic = "order fit residual exceeds threshold";
    return est;
  }
  if (fit.slope <= 0.05) {
    est.diagnostic = "sequence does not contract";
    return est;
  }

  const double rounded = std::round(fit.slope);
  const double p = std::abs(fit.slope - rounded) <= 0.25 && rounded >= 1.0 ? rounded : fit.slope;

  // tableau[j][k]: level j estimate ending at sample k (k >= j).
  const std::size_t levels = std::min<std::size_t>(static_cast<std::size_t>(opt.max_levels), n - 1);
  std::vector<std::vector<std::vector<double>>> tab(levels + 1, std::vector<std::vector<double>>(n));
  tab[0] = v;
  for (std::size_t j = 1; j <= levels; ++j) {
    const double s = p + static_cast<double>(j - 1);
    for (std::size_t k = j; k < n; ++k) {
      const double rho = std::pow(est.eps[k] / est.eps[k - 1], s);
      const auto& hi = tab[j - 1][k];
      const auto& lo = tab[j - 1][k - 1];
      std::vector<double> t(hi.size());
      for (std::size_t i = 0; i < hi.size(); ++i) t[i] = hi[i] + (hi[i] - lo[i]) * rho / (1.0 - rho);
      tab[j][k] = std::move(t);
    }
  }

  double best = INFINITY;
  std::vector<double> best_value = v.back();
  for (std::size_t j = 0; j <= levels; ++j)
    for (std::size_t k = j + 1; k < n; ++k) {
      const double err = detail::max_abs_diff(tab[j][k], tab[j][k - 1]);
      if (err <= best) {
        best = err;
        best_value = tab[j][k];
      }
    }

  detail::from_coords(best_value, est.limit);
  est.error_estimate = best;
  est.converged = monotone && best <= floor;
  if (!monotone)
    est.diagnostic = "tail deviations are not decreasing";
  else if (!est.converged)
    est.diagnostic = "extrapolated error estimate above tolerance";
  return est;
}

/// Sample f(eps) along the schedule and extrapolate.
template <typename F>
auto sample_limit(const ToleranceSchedule& sched, F&& f, const LimitOptions& opt = {}) {
  using T = std::decay_t<decltype(f(1.0))>;
  const std::vector<double> eps = sched.epsilons();
  std::vector<T> values;
  values.reserve(eps.size());
  for (double e : eps) values.push_back(f(e));
  return extrapolate_limit<T>(eps, std::move(values), opt);
}

}  // namespace dilatox
