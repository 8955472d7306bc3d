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
 * Round 2-sphere of radius R in ambient R^3 with the geodesic distance and
 * the exponential-map dilatations
 *
 *   delta^x_eps y = exp_x(eps log_x y).
 *
 * The chart is the open hemisphere around a base point, where log_x is
 * single valued. This is a strong dilatation structure that is not linear.
 */

#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "dilatox/core.hpp"

namespace dilatox {

class SphereStructure {
public:
  using Vec3 = std::array<double, 3>;

  explicit SphereStructure(double radius = 1.0, Point base = Point{0.0, 0.0, 1.0},
                           ModelDomain domain = ModelDomain::with_radius(1.2, 1.1))
      : radius_(radius), domain_(domain) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw Error(ErrorCode::InvalidModel, "sphere radius must be > 0");
    if (base.size() != 3 || !base.finite()) throw Error(ErrorCode::InvalidModel, "sphere base needs 3 coordinates");
    const Vec3 b{base[0], base[1], base[2]};
    const double n = norm(b);
    if (n == 0.0) throw Error(ErrorCode::InvalidModel, "sphere base must be nonzero");
    base_ = scale(b, 1.0 / n);
    domain_.validate();
  }

  std::string name() const { return "sphere"; }
  std::size_t dimension() const noexcept { return 3; }
  const ModelDomain& domain() const noexcept { return domain_; }
  Linearity linearity() const noexcept { return Linearity::none; }
  int top_degree() const noexcept { return 1; }
  double radius() const noexcept { return radius_; }
  Point base() const { return to_point(scale(base_, radius_)); }

  bool contains(const Point& p) const {
    if (p.size() != 3 || !p.finite()) return false;
    const Vec3 v = to_vec(p);
    const double n = norm(v);
    if (std::abs(n - radius_) > 1e-9 * radius_) return false;
    return dot(v, base_) > 0.0;
  }

  double dist(const Point& x, const Point& y) const { return radius_ * angle(to_vec(x), to_vec(y)); }

  /// Tangent vector at x (ambient coordinates) of length d(x, y).
  Point log_map(const Point& x, const Point& y) const {
    require_chart(x);
    require_chart(y);
    return to_point(log_vec(unit(to_vec(x)), unit(to_vec(y))));
  }

  Point exp_map(const Point& x, const Point& v) const {
    require_chart(x);
    return to_point(exp_vec(unit(to_vec(x)), to_vec(v)));
  }

  Point apply_dilatation(const Point& x, double eps, const Point& y) const {
    require_chart(x);
    require_chart(y);
    const Vec3 xu = unit(to_vec(x));
    const Vec3 yu = unit(to_vec(y));
    if (eps * angle(xu, yu) >= std::numbers::pi)
      throw Error(ErrorCode::ChartViolation, "dilatation wraps past the antipode");
    return to_point(exp_vec(xu, scale(log_vec(xu, yu), eps)));
  }

  /// Within 0.4 radians of the base point.
  Point sample_point(Rng& rng) const { return sample_near(base(), 0.4 * radius_, rng); }

  Point sample_near(const Point& x, double r, Rng& rng) const {
    const Vec3 xu = unit(to_vec(x));
    for (int attempt = 0; attempt < 64; ++attempt) {
      Vec3 d{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
      d = sub(d, scale(xu, dot(d, xu)));
      const double n = norm(d);
      const double rho = r * rng.uniform();
      if (n < 1e-3) continue;
      Point p = to_point(exp_vec(xu, scale(d, rho / n)));
      if (contains(p)) return p;
    }
    throw Error(ErrorCode::ChartViolation, "cannot sample inside the chart around this point");
  }

private:
  static double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
  static double norm(const Vec3& a) { return std::hypot(a[0], a[1], a[2]); }
  static Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
  static Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
  static Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
  static Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  }
  static Vec3 unit(const Vec3& a) { return scale(a, 1.0 / norm(a)); }
  static Vec3 to_vec(const Point& p) { return {p[0], p[1], p[2]}; }
  static Point to_point(const Vec3& v) { return Point{v[0], v[1], v[2]}; }

  static double angle(const Vec3& a, const Vec3& b) { return std::atan2(norm(cross(a, b)), dot(a, b)); }

  void require_chart(const Point& p) const {
    if (!contains(p)) throw Error(ErrorCode::ChartViolation, "point is outside the hemisphere chart");
  }

  // xu, yu unit vectors; result scaled by the radius.
  Vec3 log_vec(const Vec3& xu, const Vec3& yu) const {
    const Vec3 diff = sub(yu, xu);
    const Vec3 tangent = sub(diff, scale(xu, dot(diff, xu)));
    const double n = norm(tangent);
    if (n == 0.0) return {0.0, 0.0, 0.0};
    return scale(tangent, radius_ * angle(xu, yu) / n);
  }

  Vec3 exp_vec(const Vec3& xu, const Vec3& v) const {
    const double len = norm(v);
    if (len == 0.0) return scale(xu, radius_);
    const double s = len / radius_;
    const Vec3 p = add(scale(xu, std::cos(s)), scale(v, std::sin(s) / len));
    return scale(p, radius_ / norm(p));
  }

  double radius_;
  Vec3 base_;
  ModelDomain domain_;
};

}  // namespace dilatox
