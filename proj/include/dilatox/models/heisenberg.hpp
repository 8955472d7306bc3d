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
 * The Heisenberg group H^1 in coordinates (z, t), z = (a, b) in R^2:
 *
 *   (z, t)(z', t') = (z + z', t + t' + 2 Im(conj(z) z'))
 *   delta_eps (z, t) = (eps z, eps^2 t)
 *   |(z, t)| = (|z|^4 + t^2)^{1/4}          (Cygan gauge)
 *
 * With this law the Cygan gauge is subadditive, so d(x, y) = |x^{-1} y| is a
 * genuine metric.
 */

#pragma once

#include <cmath>
#include <string>

#include "dilatox/core.hpp"

namespace dilatox {

class HeisenbergGroup {
public:
  std::string name() const { return "heisenberg"; }
  std::size_t dimension() const noexcept { return 3; }
  int top_degree() const noexcept { return 2; }

  Point identity() const { return Point(3); }

  Point mul(const Point& g, const Point& h) const {
    // Im(conj(a + ib)(a' + ib')) = a b' - b a'
    const double symplectic = g[0] * h[1] - g[1] * h[0];
    return Point{g[0] + h[0], g[1] + h[1], g[2] + h[2] + 2.0 * symplectic};
  }

  Point inv(const Point& g) const { return Point{-g[0], -g[1], -g[2]}; }

  Point dilation(double eps, const Point& g) const { return Point{eps * g[0], eps * g[1], eps * eps * g[2]}; }

  double norm(const Point& g) const {
    const double z2 = g[0] * g[0] + g[1] * g[1];
    return std::sqrt(std::hypot(z2, g[2]));
  }
};

}  // namespace dilatox
