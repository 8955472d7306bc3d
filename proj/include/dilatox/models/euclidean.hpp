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
 * Finite dimensional real vector space with an l^p norm, seen as the
 * commutative conical group (V, +, eps v, |.|_p).
 */

#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "dilatox/core.hpp"

namespace dilatox {

class EuclideanGroup {
public:
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  explicit EuclideanGroup(std::size_t dim, double p = 2.0) : dim_(dim), p_(p) {
    if (dim == 0) throw Error(ErrorCode::InvalidModel, "euclidean dimension must be >= 1");
    if (!(p >= 1.0)) throw Error(ErrorCode::InvalidModel, "norm exponent must be in [1, inf]");
  }

  std::string name() const {
    return "euclidean(dim=" + std::to_string(dim_) + ",p=" + (std::isinf(p_) ? std::string("inf") : fmt_p()) + ")";
  }
  std::size_t dimension() const noexcept { return dim_; }
  double exponent() const noexcept { return p_; }
  int top_degree() const noexcept { return 1; }

  Point identity() const { return Point(dim_); }

  Point mul(const Point& g, const Point& h) const {
    Point r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) r[i] = g[i] + h[i];
    return r;
  }

  Point inv(const Point& g) const {
    Point r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) r[i] = -g[i];
    return r;
  }

  Point dilation(double eps, const Point& g) const {
    Point r(dim_);
    for (std::size_t i = 0; i < dim_; ++i) r[i] = eps * g[i];
    return r;
  }

  double norm(const Point& g) const {
    if (std::isinf(p_)) return g.max_abs();
    if (p_ == 1.0) {
      double s = 0.0;
      for (double c : g) s += std::abs(c);
      return s;
    }
    if (p_ == 2.0) {
      double s = 0.0;
      for (double c : g) s = std::hypot(s, c);
      return s;
    }
    const double m = g.max_abs();
    if (m == 0.0) return 0.0;
    double s = 0.0;
    for (double c : g) s += std::pow(std::abs(c) / m, p_);
    return m * std::pow(s, 1.0 / p_);
  }

private:
  std::string fmt_p() const {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", p_);
    return buf;
  }

  std::size_t dim_;
  double p_;
};

}  // namespace dilatox
