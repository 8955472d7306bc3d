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
 * Fixed points of compositions of two dilatations.
 *
 * In a linear dilatation structure, for eps mu != 1,
 *
 *   delta^x_eps delta^y_mu = delta^w_{eps mu}
 *
 * where w is the fixed point of the contraction on the left. paper_iteration
 * reaches w through the two-sequence scheme
 *
 *   y_{n+1} = delta^{x_n}_eps y_n,   x_{n+1} = delta^{y_{n+1}}_mu x_n,
 *
 * whose gaps d(x_n, y_n) shrink by exactly eps mu per step and along which
 * delta^{x_n}_eps delta^{y_n}_mu stays equal to delta^x_eps delta^y_mu.
 * banach_iteration is plain Picard iteration of the composed map and serves
 * as the independent check.
 */

#pragma once

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dilatox/check_report.hpp"
#include "dilatox/core.hpp"

namespace dilatox {

struct IterationRow {
  int n = 0;
  Point x, y;
  double gap = 0.0;  ///< d(x_n, y_n) in the model metric
};

struct IterationTrace {
  std::vector<IterationRow> rows;
  Point w;
  int iterations = 0;
  bool converged = false;
  /// Coefficients actually iterated. When eps mu > 1 the solver iterates the
  /// inverse composition delta^y_{1/mu} delta^x_{1/eps}, which has the same
  /// fixed point; `inverted` records that swap.
  double eps = 1.0;
  double mu = 1.0;
  bool inverted = false;
};

struct SolverOptions {
  double tol = 1e-12;
  int max_iter = 200;
};

namespace detail {
inline void require_not_unit(double kappa) {
  if (std::abs(kappa - 1.0) <= 4.0 * DBL_EPSILON)
    throw Error(ErrorCode::UnitCoefficient, "eps * mu = 1 has no contraction fixed point; it is a translation");
}

template <DilatationStructure S>
void require_strictly_close(const S& s, const Point& x, const Point& y) {
  if (!(s.dist(x, y) < s.domain().closeness))
    throw Error(ErrorCode::DomainViolation, "centers must lie strictly within the closeness radius");
}
}  // namespace detail

template <DilatationStructure S>
IterationTrace paper_iteration(const S& s, const Point& x, const Point& y, Scalar eps, Scalar mu,
                               const SolverOptions& opt = {}) {
  if (s.linearity() != Linearity::exact)
    throw Error(ErrorCode::NotLinearModel, s.name() + " is not a linear dilatation structure");
  require_in_domain(s, x, "x");
  require_in_domain(s, y, "y");
  detail::require_strictly_close(s, x, y);
  const double kappa = eps.value() * mu.value();
  detail::require_not_unit(kappa);

  IterationTrace tr;
  Point xn = x, yn = y;
  tr.eps = eps.value();
  tr.mu = mu.value();
  if (kappa > 1.0) {
    std::swap(xn, yn);
    tr.eps = 1.0 / mu.value();
    tr.mu = 1.0 / eps.value();
    tr.inverted = true;
  }

  const double start = discrepancy(xn, yn);
  for (int n = 0;; ++n) {
    tr.rows.push_back({n, xn, yn, s.dist(xn, yn)});
    if (discrepancy(xn, yn) <= opt.tol * (1.0 + start)) {
      tr.iterations = n;
      tr.converged = true;
      tr.w = xn;
      return tr;
    }
    if (n == opt.max_iter)
      throw Error(ErrorCode::NoConvergence,
                  "paper iteration did not reach tolerance in " + std::to_string(opt.max_iter) + " steps");
    Point next_y = dilate(s, xn, tr.eps, yn);
    Point next_x = dilate(s, next_y, tr.mu, xn);
    require_in_domain(s, next_x, "x_n");
    require_in_domain(s, next_y, "y_n");
    xn = std::move(next_x);
    yn = std::move(next_y);
  }
}

struct FixedPoint {
  Point point;
  int iterations = 0;
};

/// Picard iteration of a map with contraction coefficient below 1.
/// Stops when the coordinate discrepancy between z and map(z) is <= tol.
template <DilatationStructure S, typename Map>
FixedPoint contraction_fixed_point(const S& s, Map&& map, Point z0, const SolverOptions& opt = {}) {
  require_in_domain(s, z0, "initial point");
  Point z = std::move(z0);
  for (int k = 0; k <= opt.max_iter; ++k) {
    Point next = map(z);
    require_in_domain(s, next, "iterate");
    if (discrepancy(next, z) <= opt.tol) return {std::move(next), k + 1};
    z = std::move(next);
  }
  throw Error(ErrorCode::NoConvergence,
              "fixed-point iteration did not reach tolerance in " + std::to_string(opt.max_iter) + " steps");
}

/// Fixed point of delta^x_eps delta^y_mu by direct iteration from z0. For
/// eps mu > 1 the inverse map is iterated instead.
template <DilatationStructure S>
FixedPoint banach_iteration(const S& s, const Point& x, const Point& y, Scalar eps, Scalar mu, const Point& z0,
                            const SolverOptions& opt = {}) {
  require_in_domain(s, x, "x");
  require_in_domain(s, y, "y");
  const double kappa = eps.value() * mu.value();
  detail::require_not_unit(kappa);
  if (kappa < 1.0)
    return contraction_fixed_point(s, [&](const Point& z) { return dilate(s, x, eps, dilate(s, y, mu, z)); }, z0, opt);
  return contraction_fixed_point(
      s, [&](const Point& z) { return dilate(s, y, mu.inverse(), dilate(s, x, eps.inverse(), z)); }, z0, opt);
}

/// w = ((1 - eps) x + eps (1 - mu) y) / (1 - eps mu), the vector-space center.
inline Point euclidean_center_closed_form(const Point& x, const Point& y, Scalar eps, Scalar mu) {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "centers differ in dimension");
  const double e = eps.value(), m = mu.value();
  detail::require_not_unit(e * m);
  Point w(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) w[i] = ((1.0 - e) * x[i] + e * (1.0 - m) * y[i]) / (1.0 - e * m);
  return w;
}

/// max over z of the discrepancy between delta^x_eps delta^y_mu z and delta^w_{eps mu} z.
template <DilatationStructure S>
CheckReport verify_menelaos(const S& s, const Point& x, const Point& y, Scalar eps, Scalar mu, const Point& w,
                            std::span<const Point> sample_points, double tol = 1e-9) {
  CheckReport rep("menelaos", tol);
  WorstCase worst(rep);
  const Scalar kappa = eps * mu;
  for (const auto& z : sample_points) {
    const Point lhs = dilate(s, x, eps, dilate(s, y, mu, z));
    const Point rhs = dilate(s, w, kappa, z);
    worst.offer(discrepancy(lhs, rhs), s.dist(lhs, rhs), [&](CheckReport& r) {
      r.witness_points = {{"x", x}, {"y", y}, {"w", w}, {"z", z}};
      r.witness_scalars = {{"eps", eps}, {"mu", mu}};
    });
  }
  rep.finish();
  return rep;
}

/// max over n and z of the discrepancy between delta^{x_n}_eps delta^{y_n}_mu z
/// and delta^{x_0}_eps delta^{y_0}_mu z.
template <DilatationStructure S>
CheckReport check_invariance(const S& s, const IterationTrace& tr, std::span<const Point> sample_points,
                             double tol = 1e-9) {
  CheckReport rep("invariance", tol);
  if (tr.rows.empty()) return rep;
  WorstCase worst(rep);
  const auto& first = tr.rows.front();
  for (const auto& z : sample_points) {
    const Point ref = dilate(s, first.x, tr.eps, dilate(s, first.y, tr.mu, z));
    for (const auto& row : tr.rows) {
      const Point cur = dilate(s, row.x, tr.eps, dilate(s, row.y, tr.mu, z));
      worst.offer(discrepancy(cur, ref), s.dist(cur, ref), [&](CheckReport& r) {
        r.witness_points = {{"z", z}, {"x_n", row.x}, {"y_n", row.y}};
        r.witness_scalars = {{"n", static_cast<double>(row.n)}};
      });
    }
  }
  rep.finish();
  return rep;
}

/// Largest relative deviation of gap_{n+1} / gap_n from eps mu, over steps
/// where both gaps are at least min_gap.
inline double gap_law_residual(const IterationTrace& tr, double min_gap) {
  const double kappa = tr.eps * tr.mu;
  double worst = 0.0;
  for (std::size_t n = 0; n + 1 < tr.rows.size(); ++n) {
    const double g0 = tr.rows[n].gap, g1 = tr.rows[n + 1].gap;
    if (g0 < min_gap || g1 < min_gap) break;
    worst = std::max(worst, std::abs(g1 / g0 - kappa) / kappa);
  }
  return worst;
}

/**
 * Smallest distance the model metric resolves to relative accuracy `rel`
 * for points with coordinates of size `scale`. A metric of top degree k sees
 * a coordinate perturbation h as a distance of order h^{1/k}, so one unit of
 * round-off is visible up to distances of order (ulp / rel)^{1/k}. A gap
 * ratio involves two gaps with two rounded endpoints each, hence four units.
 */
template <DilatationStructure S>
double resolvable_distance(const S& s, double scale, double rel) {
  const double ulp = 4.0 * DBL_EPSILON * std::max(1.0, scale);
  return std::pow(ulp / rel, 1.0 / static_cast<double>(s.top_degree())) * std::max(1.0, scale);
}

inline void write_csv(std::ostream& os, const IterationTrace& tr) {
  const std::size_t dim = tr.rows.empty() ? 0 : tr.rows.front().x.size();
  os << "n";
  for (std::size_t i = 0; i < dim; ++i) os << ",x" << i;
  for (std::size_t i = 0; i < dim; ++i) os << ",y" << i;
  os << ",gap\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << ',' << buf;
  };
  for (const auto& r : tr.rows) {
    os << r.n;
    for (double v : r.x) put(v);
    for (double v : r.y) put(v);
    put(r.gap);
    os << '\n';
  }
}

}  // namespace dilatox
