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
 * Step-2 Carnot group V1 (+) V2 with an antisymmetric bracket [.,.]: V1 x V1 -> V2.
 * In exponential coordinates the group law truncates the BCH series:
 *
 *   (v1, v2)(w1, w2) = (v1 + w1, v2 + w2 + 1/2 [v1, w1])
 *   delta_eps (v1, v2) = (eps v1, eps^2 v2)
 *
 * Gauge: N_c(v1, v2) = max(|v1|_2, c |v2|_2^{1/2}).
 *
 * N_c is subadditive once c^2 K <= 4, where K bounds |[v, w]| <= K |v| |w|.
 * Indeed |v2 + w2 + [v1,w1]/2| <= (N(v)^2 + N(w)^2)/c^2 + K N(v) N(w) / 2.
 * Construction caps c at 2/sqrt(K) using the Frobenius norm of the bracket as
 * K, then confirms subadditivity on samples, shrinking c if a sample fails.
 */

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "dilatox/core.hpp"

namespace dilatox {

/// bracket[k][i][j] is the k-th V2 component of [e_i, e_j].
using BracketTensor = std::vector<std::vector<std::vector<double>>>;

struct GaugeCalibration {
  double requested = 1.0;
  double analytic_cap = 0.0;  ///< 2 / |bracket|_F, +inf for an abelian bracket
  double calibrated = 1.0;
  int sampled_pairs = 0;
  int shrink_rounds = 0;
};

class Step2CarnotGroup {
public:
  Step2CarnotGroup(std::size_t dim1, std::size_t dim2, BracketTensor bracket, double gauge_c = 1.0,
                   std::uint64_t calibration_seed = 0x5eed)
      : dim1_(dim1), dim2_(dim2), bracket_(std::move(bracket)), c_(gauge_c) {
    validate();
    calibrate(calibration_seed);
  }

  /// Bracket with coefficients uniform in [-1, 1] above the diagonal.
  static Step2CarnotGroup random(std::size_t dim1, std::size_t dim2, std::uint64_t seed, double gauge_c = 1.0) {
    Rng rng(seed);
    BracketTensor b(dim2, std::vector<std::vector<double>>(dim1, std::vector<double>(dim1, 0.0)));
    for (std::size_t k = 0; k < dim2; ++k)
      for (std::size_t i = 0; i < dim1; ++i)
        for (std::size_t j = i + 1; j < dim1; ++j) {
          b[k][i][j] = rng.uniform(-1.0, 1.0);
          b[k][j][i] = -b[k][i][j];
        }
    return Step2CarnotGroup(dim1, dim2, std::move(b), gauge_c, seed ^ 0xca11b7a7eULL);
  }

  std::string name() const {
    return "step2(dim1=" + std::to_string(dim1_) + ",dim2=" + std::to_string(dim2_) + ")";
  }
  std::size_t dimension() const noexcept { return dim1_ + dim2_; }
  std::size_t dim1() const noexcept { return dim1_; }
  std::size_t dim2() const noexcept { return dim2_; }
  int top_degree() const noexcept { return 2; }
  double gauge_c() const noexcept { return c_; }
  const BracketTensor& bracket() const noexcept { return bracket_; }
  const GaugeCalibration& calibration() const noexcept { return calibration_; }

  Point identity() const { return Point(dimension()); }

  Point mul(const Point& g, const Point& h) const {
    Point r(dimension());
    for (std::size_t i = 0; i < dimension(); ++i) r[i] = g[i] + h[i];
    for (std::size_t k = 0; k < dim2_; ++k) r[dim1_ + k] += 0.5 * bracket_component(k, g, h);
    return r;
  }

  /// Negation: [v1, -v1] = 0.
  Point inv(const Point& g) const {
    Point r(dimension());
    for (std::size_t i = 0; i < dimension(); ++i) r[i] = -g[i];
    return r;
  }

  Point dilation(double eps, const Point& g) const {
    Point r(dimension());
    for (std::size_t i = 0; i < dim1_; ++i) r[i] = eps * g[i];
    for (std::size_t k = 0; k < dim2_; ++k) r[dim1_ + k] = eps * eps * g[dim1_ + k];
    return r;
  }

  double norm(const Point& g) const { return gauge(g, c_); }

private:
  double bracket_component(std::size_t k, const Point& g, const Point& h) const {
    double s = 0.0;
    for (std::size_t i = 0; i < dim1_; ++i)
      for (std::size_t j = 0; j < dim1_; ++j) s += bracket_[k][i][j] * g[i] * h[j];
    return s;
  }

  double gauge(const Point& g, double c) const {
    double n1 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < dim1_; ++i) n1 = std::hypot(n1, g[i]);
    for (std::size_t k = 0; k < dim2_; ++k) n2 = std::hypot(n2, g[dim1_ + k]);
    return std::max(n1, c * std::sqrt(n2));
  }

  void validate() const {
    if (dim1_ == 0 || dim2_ == 0) throw Error(ErrorCode::InvalidModel, "step-2 layers must be nonempty");
    if (!(c_ > 0.0) || !std::isfinite(c_)) throw Error(ErrorCode::InvalidModel, "gauge_c must be positive");
    if (bracket_.size() != dim2_) throw Error(ErrorCode::InvalidModel, "bracket needs dim2 components");
    for (const auto& comp : bracket_) {
      if (comp.size() != dim1_) throw Error(ErrorCode::InvalidModel, "bracket component must be dim1 x dim1");
      for (const auto& row : comp)
        if (row.size() != dim1_) throw Error(ErrorCode::InvalidModel, "bracket component must be dim1 x dim1");
    }
    for (std::size_t k = 0; k < dim2_; ++k)
      for (std::size_t i = 0; i < dim1_; ++i)
        for (std::size_t j = 0; j < dim1_; ++j) {
          const double a = bracket_[k][i][j], b = bracket_[k][j][i];
          if (!std::isfinite(a)) throw Error(ErrorCode::InvalidModel, "bracket coefficient is not finite");
          if (std::abs(a + b) > 1e-12 * std::max(1.0, std::abs(a)))
            throw Error(ErrorCode::InvalidModel, "bracket is not antisymmetric");
        }
  }

  void calibrate(std::uint64_t seed) {
    calibration_.requested = c_;
    double frob = 0.0;
    for (const auto& comp : bracket_)
      for (const auto& row : comp)
        for (double v : row) frob = std::hypot(frob, v);
    calibration_.analytic_cap = frob > 0.0 ? 2.0 / std::sqrt(frob) : INFINITY;
    c_ = std::min(c_, calibration_.analytic_cap);

    constexpr int kPairs = 4000;
    constexpr double kMargin = 1e-12;
    Rng rng(seed);
    for (int round = 0; round < 60; ++round) {
      bool ok = true;
      Rng pass = rng;  // same sample set every round
      for (int n = 0; n < kPairs && ok; ++n) {
        Point g(dimension()), h(dimension());
        for (double& v : g) v = pass.uniform(-1.0, 1.0);
        for (double& v : h) v = pass.uniform(-1.0, 1.0);
        const double lhs = gauge(mul(g, h), c_);
        const double rhs = gauge(g, c_) + gauge(h, c_);
        ok = lhs <= rhs * (1.0 + kMargin);
      }
      calibration_.sampled_pairs += kPairs;
      if (ok) break;
      c_ *= 0.9;
      ++calibration_.shrink_rounds;
    }
    calibration_.calibrated = c_;
  }

  std::size_t dim1_;
  std::size_t dim2_;
  BracketTensor bracket_;
  double c_;
  GaugeCalibration calibration_;
};

}  // namespace dilatox
