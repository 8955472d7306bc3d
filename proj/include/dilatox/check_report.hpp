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

#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dilatox/core.hpp"

namespace dilatox {

/// Outcome of a sampled check. pass <=> max_residual <= tolerance.
struct CheckReport {
  CheckReport() = default;
  CheckReport(std::string id_, double tol) : id(std::move(id_)), tolerance(tol) {}

  std::string id;
  std::size_t samples = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  /// Same residual measured with the model metric, for information only.
  double metric_residual = 0.0;
  std::vector<std::pair<std::string, Point>> witness_points;
  std::vector<std::pair<std::string, double>> witness_scalars;
  bool pass = true;

  void finish() { pass = max_residual <= tolerance; }
};

/// Keeps the worst sample seen so far.
class WorstCase {
public:
  explicit WorstCase(CheckReport& r) : r_(r) {}

  template <typename Fill>
  void offer(double residual, double metric_residual, Fill&& fill) {
    ++r_.samples;
    r_.metric_residual = std::max(r_.metric_residual, metric_residual);
    if (r_.samples == 1 || residual > r_.max_residual) {
      r_.max_residual = residual;
      r_.witness_points.clear();
      r_.witness_scalars.clear();
      fill(r_);
    }
  }

private:
  CheckReport& r_;
};

}  // namespace dilatox
