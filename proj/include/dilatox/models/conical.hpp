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
 * Normed conical groups and the dilatation structure they induce:
 *
 *   delta^x_eps u = x delta_eps(x^{-1} u),   d(x, y) = |x^{-1} y|.
 *
 * Dilatations of a group model are defined on the whole space, so the
 * working domain is only bounded by ModelDomain::extent.
 */

#pragma once

#include <cmath>
#include <string>

#include "dilatox/core.hpp"

namespace dilatox {

template <typename G>
concept ConicalGroup = requires(const G& g, const Point& p, double e, Rng& rng) {
  { g.name() } -> std::convertible_to<std::string>;
  { g.dimension() } -> std::convertible_to<std::size_t>;
  { g.top_degree() } -> std::convertible_to<int>;
  { g.identity() } -> std::same_as<Point>;
  { g.mul(p, p) } -> std::same_as<Point>;
  { g.inv(p) } -> std::same_as<Point>;
  { g.dilation(e, p) } -> std::same_as<Point>;
  { g.norm(p) } -> std::convertible_to<double>;
};

namespace detail {
template <ConicalGroup G>
void require_element(const G& g, const Point& p) {
  if (p.size() != g.dimension())
    throw Error(ErrorCode::DimensionMismatch, g.name() + " element needs " + std::to_string(g.dimension()) +
                                                  " coordinates, got " + std::to_string(p.size()));
  if (!p.finite()) throw Error(ErrorCode::NonFiniteInput, "group element is not finite");
}
}  // namespace detail

template <ConicalGroup G>
Point group_mul(const G& m, const Point& g, const Point& h) {
  detail::require_element(m, g);
  detail::require_element(m, h);
  return m.mul(g, h);
}

template <ConicalGroup G>
Point group_inv(const G& m, const Point& g) {
  detail::require_element(m, g);
  return m.inv(g);
}

template <ConicalGroup G>
Point intrinsic_dilation(const G& m, Scalar eps, const Point& g) {
  detail::require_element(m, g);
  return m.dilation(eps.value(), g);
}

template <ConicalGroup G>
double homogeneous_norm(const G& m, const Point& g) {
  detail::require_element(m, g);
  return m.norm(g);
}

/// Dilatation structure of a normed conical group.
template <ConicalGroup G>
class ConicalStructure {
public:
  explicit ConicalStructure(G group, ModelDomain domain = ModelDomain::with_radius(2.0, 1.5))
      : group_(std::move(group)), domain_(domain) {
    domain_.validate();
  }

  const G& group() const noexcept { return group_; }

  std::string name() const { return group_.name(); }
  std::size_t dimension() const { return group_.dimension(); }
  const ModelDomain& domain() const noexcept { return domain_; }
  Linearity linearity() const noexcept { return Linearity::exact; }
  int top_degree() const { return group_.top_degree(); }

  double dist(const Point& x, const Point& y) const { return group_.norm(group_.mul(group_.inv(x), y)); }

  Point apply_dilatation(const Point& x, double eps, const Point& u) const {
    return group_.mul(x, group_.dilation(eps, group_.mul(group_.inv(x), u)));
  }

  bool contains(const Point& p) const { return p.finite() && p.max_abs() <= domain_.extent; }

  /// Uniform in the coordinate box [-1, 1]^n.
  Point sample_point(Rng& rng) const {
    Point p(dimension());
    for (double& c : p) c = rng.uniform(-1.0, 1.0);
    return p;
  }

  /// x * s with |s| uniform in [0, radius): a box sample rescaled by the
  /// intrinsic dilation, so the gauge lands exactly on the drawn radius.
  Point sample_near(const Point& x, double radius, Rng& rng) const {
    Point s = sample_point(rng);
    const double n = group_.norm(s);
    const double rho = radius * rng.uniform();
    if (n == 0.0 || rho == 0.0) return x;
    return group_.mul(x, group_.dilation(rho / n, s));
  }

private:
  G group_;
  ModelDomain domain_;
};

template <ConicalGroup G>
ConicalStructure<G> make_dilatation_structure(G group, ModelDomain domain = ModelDomain::with_radius(2.0, 1.5)) {
  return ConicalStructure<G>(std::move(group), domain);
}

}  // namespace dilatox
