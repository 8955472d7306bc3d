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
 * Sampled verification of the dilatation-structure axioms, the norm axioms
 * of a conical group, and the linearity identity
 *
 *   delta^x_eps delta^y_mu z = delta^{delta^x_eps y}_mu delta^x_eps z.
 *
 * A3 and A4 limits are taken along a ToleranceSchedule. Uniform convergence
 * on compacts is checked as convergence over a finite grid of base points.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "dilatox/check_report.hpp"
#include "dilatox/core.hpp"
#include "dilatox/extrapolation.hpp"
#include "dilatox/models/conical.hpp"

namespace dilatox {

/// One sampled configuration: y and z within closeness/2 of x, so the
/// triple is pairwise within the closeness radius.
struct AxiomSample {
  Point x, y, z;
  double eps = 1.0;
  double mu = 1.0;
};

template <DilatationStructure S>
std::vector<AxiomSample> make_axiom_samples(const S& s, std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  const double r = 0.5 * s.domain().closeness;
  std::vector<AxiomSample> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    AxiomSample a;
    a.x = s.sample_point(rng);
    a.y = s.sample_near(a.x, r, rng);
    a.z = s.sample_near(a.x, r, rng);
    a.eps = 1.0 - rng.uniform();  // (0, 1]
    a.mu = 1.0 - rng.uniform();
    out.push_back(std::move(a));
  }
  return out;
}

template <DilatationStructure S>
CheckReport check_a1(const S& s, std::span<const AxiomSample> samples, double tol = 1e-9) {
  CheckReport rep("A1", tol);
  WorstCase worst(rep);
  for (const auto& a : samples) {
    const Point fixed = dilate(s, a.x, a.eps, a.x);
    const Point ident = dilate(s, a.x, 1.0, a.y);
    const double res = std::max(discrepancy(fixed, a.x), discrepancy(ident, a.y));
    const double met = std::max(s.dist(fixed, a.x), s.dist(ident, a.y));
    worst.offer(res, met, [&](CheckReport& r) {
      r.witness_points = {{"x", a.x}, {"y", a.y}};
      r.witness_scalars = {{"eps", a.eps}};
    });
  }
  rep.finish();
  return rep;
}

template <DilatationStructure S>
CheckReport check_a2(const S& s, std::span<const AxiomSample> samples, double tol = 1e-9) {
  CheckReport rep("A2", tol);
  WorstCase worst(rep);
  for (const auto& a : samples) {
    const Point lhs = dilate(s, a.x, a.eps, dilate(s, a.x, a.mu, a.y));
    const Point rhs = dilate(s, a.x, a.eps * a.mu, a.y);
    worst.offer(discrepancy(lhs, rhs), s.dist(lhs, rhs), [&](CheckReport& r) {
      r.witness_points = {{"x", a.x}, {"u", a.y}};
      r.witness_scalars = {{"eps", a.eps}, {"mu", a.mu}};
    });
  }
  rep.finish();
  return rep;
}

/// Both sides of the linearity identity for one triple.
template <DilatationStructure S>
std::pair<Point, Point> linearity_sides(const S& s, const Point& x, const Point& y, const Point& z, Scalar eps,
                                        Scalar mu) {
  Point lhs = dilate(s, x, eps, dilate(s, y, mu, z));
  Point rhs = dilate(s, dilate(s, x, eps, y), mu, dilate(s, x, eps, z));
  return {std::move(lhs), std::move(rhs)};
}

template <DilatationStructure S>
CheckReport check_linearity(const S& s, std::span<const AxiomSample> samples, double tol = 1e-9) {
  CheckReport rep("linearity", tol);
  WorstCase worst(rep);
  for (const auto& a : samples) {
    const auto [lhs, rhs] = linearity_sides(s, a.x, a.y, a.z, a.eps, a.mu);
    worst.offer(discrepancy(lhs, rhs), s.dist(lhs, rhs), [&](CheckReport& r) {
      r.witness_points = {{"x", a.x}, {"y", a.y}, {"z", a.z}};
      r.witness_scalars = {{"eps", a.eps}, {"mu", a.mu}};
    });
  }
  rep.finish();
  return rep;
}

/// Norm axioms (a)-(d) of a normed conical group, one report each.
template <ConicalGroup G>
std::vector<CheckReport> check_norm_axioms(const G& m, std::size_t count, std::uint64_t seed, double tol = 1e-9) {
  std::vector<CheckReport> reps(4);
  const char* ids[] = {"norm.a", "norm.b", "norm.c", "norm.d"};
  for (int i = 0; i < 4; ++i) reps[i] = CheckReport(ids[i], tol);
  WorstCase pos(reps[0]), sub(reps[1]), sym(reps[2]), hom(reps[3]);

  auto draw = [&](Rng& rng) {
    Point g(m.dimension());
    for (double& c : g) c = rng.uniform(-1.0, 1.0);
    return m.dilation(rng.uniform(0.05, 2.0), g);
  };

  const Point e = m.identity();
  pos.offer(std::abs(m.norm(e)), std::abs(m.norm(e)), [&](CheckReport& r) { r.witness_points = {{"g", e}}; });

  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const Point g = draw(rng);
    const Point h = draw(rng);
    const double ng = m.norm(g), nh = m.norm(h);

    // (a) nonnegative, and zero only at the identity
    const double a_res = ng < 0.0 ? -ng : (ng == 0.0 && g != e ? 1.0 : 0.0);
    pos.offer(a_res, a_res, [&](CheckReport& r) { r.witness_points = {{"g", g}}; });

    // (b) subadditivity defect, relative
    const double ngh = m.norm(m.mul(g, h));
    const double b_res = std::max(0.0, ngh - ng - nh) / std::max(1.0, ng + nh);
    sub.offer(b_res, b_res, [&](CheckReport& r) { r.witness_points = {{"g", g}, {"h", h}}; });

    // (c) symmetry
    const double c_res = relative_gap(m.norm(m.inv(g)), ng);
    sym.offer(c_res, c_res, [&](CheckReport& r) { r.witness_points = {{"g", g}}; });

    // (d) homogeneity, alternating dyadic and generic coefficients
    const double eps = i % 2 == 0 ? std::ldexp(1.0, -static_cast<int>(1 + rng.below(20))) : 1.0 - rng.uniform();
    const double d_res = relative_gap(m.norm(m.dilation(eps, g)), eps * ng);
    hom.offer(d_res, d_res, [&](CheckReport& r) {
      r.witness_points = {{"g", g}};
      r.witness_scalars = {{"eps", eps}};
    });
  }
  for (auto& r : reps) r.finish();
  return reps;
}

template <DilatationStructure S>
LimitEstimate<double> check_a3(const S& s, const Point& x, const Point& u, const Point& v,
                               const ToleranceSchedule& sched, const LimitOptions& opt = {}) {
  return sample_limit(sched, [&](double e) { return cone_quotient(s, x, e, u, v); }, opt);
}

template <DilatationStructure S>
LimitEstimate<Point> check_a4(const S& s, const Point& x, const Point& u, const Point& v,
                              const ToleranceSchedule& sched, const LimitOptions& opt = {}) {
  return sample_limit(sched, [&](double e) { return delta2(s, x, e, u, v); }, opt);
}

/// Aggregate of an A3 or A4 limit check over a grid of (x, u, v).
struct GridReport {
  explicit GridReport(std::string id_) : id(std::move(id_)) {}

  std::string id;
  std::size_t triples = 0;
  std::size_t converged = 0;
  std::size_t stationary = 0;
  double max_error_estimate = 0.0;
  double order_min = INFINITY;
  double order_max = -INFINITY;
  /// max_k |v_k - v_0| / max(1, |v_0|) over all sampled sequences
  double max_sequence_spread = 0.0;
  double order_spread_limit = 0.5;
  std::string first_failure;
  bool pass = false;

  double order_spread() const { return order_max >= order_min ? order_max - order_min : 0.0; }
};

struct GridTriple {
  Point x, u, v;
};

/// n base points, each with n u's and n v's, drawn within closeness/2.
template <DilatationStructure S>
std::vector<GridTriple> make_grid(const S& s, int n, std::uint64_t seed) {
  Rng rng(seed);
  const double r = 0.5 * s.domain().closeness;
  std::vector<GridTriple> out;
  for (int i = 0; i < n; ++i) {
    const Point x = s.sample_point(rng);
    std::vector<Point> us, vs;
    for (int j = 0; j < n; ++j) us.push_back(s.sample_near(x, r, rng));
    for (int j = 0; j < n; ++j) vs.push_back(s.sample_near(x, r, rng));
    for (const auto& u : us)
      for (const auto& v : vs) out.push_back({x, u, v});
  }
  return out;
}

namespace detail {
template <typename T>
double spread_of(const std::vector<T>& vals) {
  const std::vector<double> base = as_coords(vals.front());
  const double scale = std::max(1.0, max_abs(base));
  double m = 0.0;
  for (const auto& v : vals) m = std::max(m, max_abs_diff(as_coords(v), base) / scale);
  return m;
}

template <typename T>
void accumulate(GridReport& g, const LimitEstimate<T>& est) {
  ++g.triples;
  if (est.converged) ++g.converged;
  else if (g.first_failure.empty()) g.first_failure = est.diagnostic;
  if (est.stationary) ++g.stationary;
  g.max_error_estimate = std::max(g.max_error_estimate, est.error_estimate);
  if (est.order) {
    g.order_min = std::min(g.order_min, *est.order);
    g.order_max = std::max(g.order_max, *est.order);
  }
  g.max_sequence_spread = std::max(g.max_sequence_spread, spread_of(est.values));
}
}  // namespace detail

template <DilatationStructure S>
GridReport check_a3_grid(const S& s, std::span<const GridTriple> grid, const ToleranceSchedule& sched,
                         const LimitOptions& opt = {}) {
  GridReport g("A3");
  for (const auto& t : grid) detail::accumulate(g, check_a3(s, t.x, t.u, t.v, sched, opt));
  g.pass = g.converged == g.triples && g.order_spread() <= g.order_spread_limit;
  return g;
}

template <DilatationStructure S>
GridReport check_a4_grid(const S& s, std::span<const GridTriple> grid, const ToleranceSchedule& sched,
                         const LimitOptions& opt = {}) {
  GridReport g("A4");
  for (const auto& t : grid) detail::accumulate(g, check_a4(s, t.x, t.u, t.v, sched, opt));
  g.pass = g.converged == g.triples && g.order_spread() <= g.order_spread_limit;
  return g;
}

}  // namespace dilatox
