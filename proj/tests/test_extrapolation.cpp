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

#include <gtest/gtest.h>

#include <cmath>

#include "dilatox/extrapolation.hpp"
#include "dilatox/random.hpp"

using namespace dilatox;

namespace {

LimitEstimate<double> fit(const ToleranceSchedule& s, auto f) { return sample_limit(s, f); }

}  // namespace

TEST(Schedule, GeometricAndValidated) {
  const ToleranceSchedule s{1.0, 0.5, 4};
  EXPECT_EQ(s.epsilons(), (std::vector<double>{1.0, 0.5, 0.25, 0.125}));
  EXPECT_EQ(ToleranceSchedule{}.epsilons().size(), 11u);
  for (const ToleranceSchedule& bad : {ToleranceSchedule{2.0, 0.5, 4}, ToleranceSchedule{1.0, 1.0, 4},
                                       ToleranceSchedule{1.0, 0.5, 0}, ToleranceSchedule{0.0, 0.5, 4}}) {
    EXPECT_THROW(bad.validate(), Error);
  }
}

TEST(Limit, KnownPowerLaws) {
  for (int p = 1; p <= 3; ++p) {
    const auto est = fit({}, [p](double e) { return 0.7 + 0.3 * std::pow(e, p); });
    ASSERT_TRUE(est.converged) << "p=" << p << " " << est.diagnostic;
    ASSERT_TRUE(est.order.has_value());
    EXPECT_NEAR(*est.order, p, 0.05);
    EXPECT_NEAR(est.limit, 0.7, 1e-12);
    EXPECT_FALSE(est.stationary);
  }
}

TEST(Limit, MixedOrdersResolveToLeadingOrder) {
  const auto est = fit({}, [](double e) { return -1.25 + 0.4 * e - 2.0 * e * e + 0.5 * e * e * e; });
  ASSERT_TRUE(est.converged) << est.diagnostic;
  EXPECT_NEAR(*est.order, 1.0, 0.1);
  EXPECT_NEAR(est.limit, -1.25, 1e-10);
}

TEST(Limit, ConstantSequenceIsStationary) {
  const auto est = fit({}, [](double) { return 3.5; });
  EXPECT_TRUE(est.converged);
  EXPECT_TRUE(est.stationary);
  EXPECT_FALSE(est.order.has_value());
  EXPECT_EQ(est.limit, 3.5);
}

TEST(Limit, DivergentAndOscillatingSequencesFail) {
  const auto blow = fit({}, [](double e) { return 1.0 / e; });
  EXPECT_FALSE(blow.converged);
  EXPECT_FALSE(blow.diagnostic.empty());
  const auto wave = fit({}, [](double e) { return std::sin(1.0 / e); });
  EXPECT_FALSE(wave.converged);
  const auto log_growth = fit({}, [](double e) { return std::log(e); });
  EXPECT_FALSE(log_growth.converged);
}

TEST(Limit, FractionalOrderIsFitted) {
  const auto est = fit({}, [](double e) { return 1.0 + std::sqrt(e); });
  ASSERT_TRUE(est.converged) << est.diagnostic;
  EXPECT_NEAR(*est.order, 0.5, 0.05);
  EXPECT_NEAR(est.limit, 1.0, 1e-9);
}

TEST(Limit, LogarithmicConvergenceIsNotAccepted) {
  const auto est = fit({}, [](double e) { return 1.0 + 1.0 / (1.0 - std::log(e)); });
  EXPECT_FALSE(est.converged);
}

TEST(Limit, RoundOffTailIsCut) {
  // Constant plus noise growing like 1/eps^2 with alternating sign.
  int k = 0;
  const auto est = fit({}, [&k](double e) { return 0.25 + (k++ % 2 ? 1.0 : -1.0) * 1e-15 / (e * e); });
  EXPECT_TRUE(est.converged) << est.diagnostic;
  EXPECT_TRUE(est.stationary);
  EXPECT_LT(est.used_samples, est.values.size());
  EXPECT_NEAR(est.limit, 0.25, 1e-12);
}

TEST(Limit, PointValuedSequences) {
  const auto est = sample_limit(ToleranceSchedule{}, [](double e) { return Point{1.0 + e * e, -2.0 + 3.0 * e * e}; });
  ASSERT_TRUE(est.converged) << est.diagnostic;
  EXPECT_NEAR(est.limit[0], 1.0, 1e-12);
  EXPECT_NEAR(est.limit[1], -2.0, 1e-12);
  EXPECT_NEAR(*est.order, 2.0, 0.05);
}

TEST(Limit, InputValidation) {
  EXPECT_THROW(extrapolate_limit<double>({1.0, 0.5}, {1.0}), Error);
  EXPECT_THROW(extrapolate_limit<double>({0.5, 1.0, 0.25}, {1.0, 1.0, 1.0}), Error);
  const auto shortest = extrapolate_limit<double>({1.0, 0.5}, {1.0, 1.0});
  EXPECT_FALSE(shortest.converged);
}

TEST(Limit, RandomPowerLawsProperty) {
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    const double L = rng.uniform(-5.0, 5.0), c = rng.uniform(-2.0, 2.0);
    const int p = 1 + static_cast<int>(rng.below(2));
    const auto est = fit({}, [&](double e) { return L + c * std::pow(e, p); });
    ASSERT_TRUE(est.converged) << L << " " << c << " " << p << " " << est.diagnostic;
    EXPECT_LE(std::abs(est.limit - L), 1e-9 * std::max(1.0, std::abs(L)));
  }
}
