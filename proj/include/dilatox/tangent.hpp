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
 * The metric tangent space at a point, rebuilt from dilatations alone:
 *
 *   d^x(u, v)   = lim (1/eps) d(delta^x_eps u, delta^x_eps v)
 *   Sigma^x(u, v) = lim Sigma^x_eps(u, v)
 *   inv^x(u)    = lim Delta^x_eps(u, x)
 *
 * For a strong dilatation structure (U(x), Sigma^x, delta^x, d^x) is a normed
 * local conical group with neutral element x.
 */

#pragma once

#include <string>
#include <vector>

#include "dilatox/check_report.hpp"
#include "dilatox/core.hpp"
#include "dilatox/extrapolation.hpp"

namespace dilatox {

template <DilatationStructure S>
class TangentSpace {
public:
  TangentSpace(S structure, Point base, ToleranceSchedule sched = {}, LimitOptions opt = {})
      : s_(std::move(structure)), base_(std::move(base)), sched_(sched), opt_(opt) {
    require_in_domain(s_, base_, "tangent base point");
    sched_.validate();
  }

  const S& structure() const noexcept { return s_; }
  const Point& base() const noexcept { return base_; }
  const ToleranceSchedule& schedule() const noexcept { return sched_; }

  LimitEstimate<double> metric_estimate(const Point& u, const Point& v) const {
    return sample_limit(sched_, [&](double e) { return cone_quotient(s_, base_, e, u, v); }, opt_);
  }

  LimitEstimate<Point> op_estimate(const Point& u, const Point& v) const {
    return sample_limit(sched_, [&](double e) { return sigma_eps(s_, base_, e, u, v); }, opt_);
  }

  LimitEstimate<Point> inv_estimate(const Point& u) const {
    return sample_limit(sched_, [&](double e) { return inv_eps(s_, base_, e, u); }, opt_);
  }

  double metric(const Point& u, const Point& v) const { return settled(metric_estimate(u, v), "d^x"); }
  Point op(const Point& u, const Point& v) const { return settled(op_estimate(u, v), "Sigma^x"); }
  Point inv(const Point& u) const { return settled(inv_estimate(u), "inv^x"); }

private:
  template <typename T>
  static T settled(LimitEstimate<T> est, const char* what) {
    if (!est.converged)
      throw Error(ErrorCode::NoConvergence, std::string(what) + " limit did not converge: " + est.diagnostic);
    return std::move(est.limit);
  }

  S s_;
  Point base_;
  ToleranceSchedule sched_;
  LimitOptions opt_;
};

template <DilatationStructure S>
double tangent_metric(const S& s, const Point& x, const Point& u, const Point& v, const ToleranceSchedule& sched = {}) {
  return TangentSpace<S>(s, x, sched).metric(u, v);
}

template <DilatationStructure S>
Point tangent_op(const S& s, const Point& x, const Point& u, const Point& v, const ToleranceSchedule& sched = {}) {
  return TangentSpace<S>(s, x, sched).op(u, v);
}

template <DilatationStructure S>
Point tangent_inv(const S& s, const Point& x, const Point& u, const ToleranceSchedule& sched = {}) {
  return TangentSpace<S>(s, x, sched).inv(u);
}

/**
 * Conical-group properties of the tangent space at x, on `count` samples
 * drawn within closeness/4 of x:
 *   conical.b  d^x(Sigma^x(w,u), Sigma^x(w,v)) = d^x(u,v)
 *   conical.c  delta^x_eps Sigma^x(u,v) = Sigma^x(delta^x_eps u, delta^x_eps v)
 *   conical.d  d^x(u,v) = (1/mu) d^x(delta^x_mu u, delta^x_mu v)
 * eps and mu are drawn from [0.1, 1]; much smaller coefficients shrink pairs
 * below the distance a Hoelder gauge resolves in double precision.
 */
template <DilatationStructure S>
std::vector<CheckReport> verify_conical(const S& s, const Point& x, std::size_t count, std::uint64_t seed,
                                        const ToleranceSchedule& sched = {}, double tol = 1e-9) {
  const TangentSpace<S> tan(s, x, sched);
  std::vector<CheckReport> reps{CheckReport("conical.b", tol), CheckReport("conical.c", tol),
                                CheckReport("conical.d", tol)};
  WorstCase inv_left(reps[0]), autom(reps[1]), cone(reps[2]);
  const double r = 0.25 * s.domain().closeness;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const Point u = s.sample_near(x, r, rng);
    const Point v = s.sample_near(x, r, rng);
    const Point w = s.sample_near(x, r, rng);
    const double eps = rng.uniform(0.1, 1.0);
    const double mu = rng.uniform(0.1, 1.0);
    const double duv = tan.metric(u, v);

    const double b = relative_gap(tan.metric(tan.op(w, u), tan.op(w, v)), duv);
    inv_left.offer(b, b, [&](CheckReport& rep) { rep.witness_points = {{"u", u}, {"v", v}, {"w", w}}; });

    const Point lhs = dilate(s, x, eps, tan.op(u, v));
    const Point rhs = tan.op(dilate(s, x, eps, u), dilate(s, x, eps, v));
    autom.offer(discrepancy(lhs, rhs), s.dist(lhs, rhs), [&](CheckReport& rep) {
      rep.witness_points = {{"u", u}, {"v", v}};
      rep.witness_scalars = {{"eps", eps}};
    });

    const double d = relative_gap(tan.metric(dilate(s, x, mu, u), dilate(s, x, mu, v)) / mu, duv);
    cone.offer(d, d, [&](CheckReport& rep) {
      rep.witness_points = {{"u", u}, {"v", v}};
      rep.witness_scalars = {{"mu", mu}};
    });
  }
  for (auto& rep : reps) rep.finish();
  return reps;
}

/// sup over sampled u, v in B(x, r) of |d(u, v) - d^x(u, v)| / r. Tends to 0
/// as r -> 0 when the space has a metric tangent space at x.
template <DilatationStructure S>
double metric_tangent_defect(const S& s, const Point& x, double r, std::size_t count, std::uint64_t seed,
                             const ToleranceSchedule& sched = {}) {
  const TangentSpace<S> tan(s, x, sched);
  Rng rng(seed);
  double worst = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const Point u = s.sample_near(x, r, rng);
    const Point v = s.sample_near(x, r, rng);
    worst = std::max(worst, std::abs(s.dist(u, v) - tan.metric(u, v)) / r);
  }
  return worst;
}

}  // namespace dilatox
