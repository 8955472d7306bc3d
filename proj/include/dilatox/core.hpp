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
 * Model-independent vocabulary of dilatation structures: coefficients,
 * points, domain constants, the structure concept, and the derived operators
 * built from dilatations alone (cone quotient, the second-order difference
 * and the approximate sum).
 *
 * Coefficients live in (0, +inf) under multiplication. A coefficient above 1
 * denotes the inverse dilatation of its reciprocal.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dilatox/random.hpp"

namespace dilatox {

enum class ErrorCode {
  DimensionMismatch,
  NonFiniteInput,
  NonPositiveScalar,
  DomainViolation,
  ChartViolation,
  InvalidModel,
  NoConvergence,
  UnitCoefficient,
  NotLinearModel,
  ConfigParseError,
  UnsupportedFormat,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
    case ErrorCode::NonPositiveScalar: return "NonPositiveScalar";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::ChartViolation: return "ChartViolation";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::UnitCoefficient: return "UnitCoefficient";
    case ErrorCode::NotLinearModel: return "NotLinearModel";
    case ErrorCode::ConfigParseError: return "ConfigParseError";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

/// Dilatation coefficient, a positive finite real.
class Scalar {
public:
  Scalar(double value) : value_(value) {  // NOLINT: implicit from double is intended
    if (!std::isfinite(value)) throw Error(ErrorCode::NonFiniteInput, "coefficient is not finite");
    if (value <= 0.0) throw Error(ErrorCode::NonPositiveScalar, "coefficient must be > 0");
  }

  double value() const noexcept { return value_; }
  operator double() const noexcept { return value_; }  // NOLINT

  Scalar inverse() const { return Scalar(1.0 / value_); }

  friend Scalar operator*(Scalar a, Scalar b) { return Scalar(a.value_ * b.value_); }
  friend bool operator==(Scalar a, Scalar b) = default;

private:
  double value_;
};

/// Coordinates of a point of a model space (a group element for group models).
class Point {
public:
  Point() = default;
  explicit Point(std::size_t dim, double fill = 0.0) : c_(dim, fill) {}
  Point(std::initializer_list<double> c) : c_(c) {}
  explicit Point(std::vector<double> c) : c_(std::move(c)) {}

  std::size_t size() const noexcept { return c_.size(); }
  double& operator[](std::size_t i) { return c_[i]; }
  double operator[](std::size_t i) const { return c_[i]; }

  auto begin() noexcept { return c_.begin(); }
  auto end() noexcept { return c_.end(); }
  auto begin() const noexcept { return c_.begin(); }
  auto end() const noexcept { return c_.end(); }

  std::span<const double> coords() const noexcept { return c_; }
  const std::vector<double>& vec() const noexcept { return c_; }

  bool finite() const {
    return std::all_of(c_.begin(), c_.end(), [](double v) { return std::isfinite(v); });
  }

  double max_abs() const {
    double m = 0.0;
    for (double v : c_) m = std::max(m, std::abs(v));
    return m;
  }

  friend bool operator==(const Point&, const Point&) = default;

private:
  std::vector<double> c_;
};

/// delta^center_coeff as a value.
struct DilatationMap {
  Point center;
  Scalar coeff;
};

/**
 * Domain constants of a structure: A bounds the balls on which dilatations
 * act, B the image balls of inverse dilatations, closeness the radius within
 * which points count as "sufficiently close" for second-order constructions.
 * extent is a coordinate bound beyond which results are treated as leaving
 * the working domain.
 */
struct ModelDomain {
  double A = 2.0;
  double B = 1.5;
  double closeness = 1.0;
  double extent = 1e6;

  static ModelDomain with_radius(double A, double B) {
    ModelDomain d{A, B, 0.75 * A, 1e6};
    d.validate();
    return d;
  }

  void validate() const {
    if (!(B > 1.0 && B <= A))
      throw Error(ErrorCode::InvalidModel, "domain constants need 1 < B <= A");
    if (!(closeness > 0.0)) throw Error(ErrorCode::InvalidModel, "closeness must be > 0");
    if (!(extent > 0.0)) throw Error(ErrorCode::InvalidModel, "extent must be > 0");
  }
};

enum class Linearity { exact, none };

inline const char* to_string(Linearity l) { return l == Linearity::exact ? "exact" : "none"; }

/// Absolute plus relative comparison tolerance.
struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-9;

  bool close(double a, double b) const {
    return std::abs(a - b) <= abs + rel * std::max(std::abs(a), std::abs(b));
  }
};

/**
 * Coordinate discrepancy of two points, relative above unit scale:
 * max_i |a_i - b_i| / max(1, |a|_inf, |b|_inf).
 *
 * Residuals of the numerical checks are measured with this rather than with
 * the model metric. Homogeneous gauges are only Hoelder-1/2 in the
 * coordinates, so a one-ulp coordinate error would show up as ~1e-8 in the
 * gauge distance.
 */
inline double discrepancy(const Point& a, const Point& b) {
  if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "discrepancy of unequal points");
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a[i] - b[i]));
  return diff / std::max({1.0, a.max_abs(), b.max_abs()});
}

inline double relative_gap(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

/**
 * A dilatation structure on a concrete model space.
 *
 * apply_dilatation is the raw map y -> delta^x_eps y; callers go through
 * dilate(), which validates arguments. top_degree is the largest homogeneity
 * degree among the coordinates (1 for normed spaces, 2 for step-2 groups) and
 * bounds how finely the metric resolves nearby points.
 */
template <typename S>
concept DilatationStructure = requires(const S& s, const Point& p, double e, Rng& rng) {
  { s.name() } -> std::convertible_to<std::string>;
  { s.dimension() } -> std::convertible_to<std::size_t>;
  { s.domain() } -> std::convertible_to<ModelDomain>;
  { s.linearity() } -> std::same_as<Linearity>;
  { s.top_degree() } -> std::convertible_to<int>;
  { s.dist(p, p) } -> std::convertible_to<double>;
  { s.apply_dilatation(p, e, p) } -> std::same_as<Point>;
  { s.contains(p) } -> std::convertible_to<bool>;
  { s.sample_point(rng) } -> std::same_as<Point>;
  { s.sample_near(p, e, rng) } -> std::same_as<Point>;
};

template <DilatationStructure S>
void require_point(const S& s, const Point& p, const char* what) {
  if (p.size() != s.dimension())
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + " has " + std::to_string(p.size()) + " coordinates, model needs " +
                    std::to_string(s.dimension()));
  if (!p.finite()) throw Error(ErrorCode::NonFiniteInput, std::string(what) + " is not finite");
}

template <DilatationStructure S>
void require_in_domain(const S& s, const Point& p, const char* what) {
  require_point(s, p, what);
  if (!s.contains(p)) throw Error(ErrorCode::DomainViolation, std::string(what) + " left the working domain");
}

/// delta^x_eps y. For eps = 1 returns y unchanged.
template <DilatationStructure S>
Point dilate(const S& s, const Point& x, Scalar eps, const Point& y) {
  require_point(s, x, "center");
  require_point(s, y, "argument");
  if (eps.value() == 1.0) return y;
  Point r = s.apply_dilatation(x, eps.value(), y);
  if (!r.finite()) throw Error(ErrorCode::NonFiniteInput, "dilatation produced a non-finite point");
  return r;
}

/// (1/eps) d(delta^x_eps u, delta^x_eps v), for eps in (0, 1] and u, v in B(x, A).
template <DilatationStructure S>
double cone_quotient(const S& s, const Point& x, Scalar eps, const Point& u, const Point& v) {
  if (eps.value() > 1.0) throw Error(ErrorCode::DomainViolation, "cone quotient needs eps <= 1");
  const double A = s.domain().A;
  if (s.dist(x, u) > A || s.dist(x, v) > A)
    throw Error(ErrorCode::DomainViolation, "cone quotient arguments outside B(x, A)");
  return s.dist(dilate(s, x, eps, u), dilate(s, x, eps, v)) / eps.value();
}

namespace detail {
template <DilatationStructure S>
void require_close(const S& s, std::initializer_list<const Point*> pts) {
  const double c = s.domain().closeness;
  for (auto i = pts.begin(); i != pts.end(); ++i)
    for (auto j = std::next(i); j != pts.end(); ++j)
      if (s.dist(**i, **j) > c)
        throw Error(ErrorCode::DomainViolation, "points are not within the closeness radius");
}

// eps = 1 is admitted: both operators then reduce to v.
inline void require_small_eps(Scalar eps) {
  if (!(eps.value() <= 1.0)) throw Error(ErrorCode::DomainViolation, "second-order operators need eps <= 1");
}
}  // namespace detail

/// Delta^x_eps(u, v) = delta^{delta^x_eps u}_{1/eps} delta^x_eps v.
template <DilatationStructure S>
Point delta2(const S& s, const Point& x, Scalar eps, const Point& u, const Point& v) {
  detail::require_small_eps(eps);
  detail::require_close(s, {&x, &u, &v});
  const Point base = dilate(s, x, eps, u);
  return dilate(s, base, eps.inverse(), dilate(s, x, eps, v));
}

/// Sigma^x_eps(u, v) = delta^x_{1/eps} delta^{delta^x_eps u}_eps v.
template <DilatationStructure S>
Point sigma_eps(const S& s, const Point& x, Scalar eps, const Point& u, const Point& v) {
  detail::require_small_eps(eps);
  detail::require_close(s, {&x, &u, &v});
  const Point base = dilate(s, x, eps, u);
  return dilate(s, x, eps.inverse(), dilate(s, base, eps, v));
}

/// Approximant of the tangent inverse: Delta^x_eps(u, x).
template <DilatationStructure S>
Point inv_eps(const S& s, const Point& x, Scalar eps, const Point& u) {
  return delta2(s, x, eps, u, x);
}

}  // namespace dilatox
