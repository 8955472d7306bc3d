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
#include <limits>

#include "dilatox/core.hpp"
#include "dilatox/models.hpp"
#include "test_util.hpp"

using namespace dilatox;
using namespace dilatox::testing;

namespace {

template <typename Fn>
void expect_error(ErrorCode code, Fn&& fn) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

}  // namespace

TEST(Scalar, RejectsNonPositiveAndNonFinite) {
  expect_error(ErrorCode::NonPositiveScalar, [] { Scalar s(0.0); });
  expect_error(ErrorCode::NonPositiveScalar, [] { Scalar s(-0.5); });
  expect_error(ErrorCode::NonFiniteInput, [] { Scalar s(std::numeric_limits<double>::quiet_NaN()); });
  expect_error(ErrorCode::NonFiniteInput, [] { Scalar s(std::numeric_limits<double>::infinity()); });
}

TEST(Scalar, ProductAndInverse) {
  const Scalar a(0.25), b(4.0);
  EXPECT_EQ((a * b).value(), 1.0);
  EXPECT_EQ(a.inverse().value(), 4.0);
}

TEST(ModelDomain, Validation) {
  EXPECT_NO_THROW(ModelDomain::with_radius(2.0, 1.5));
  expect_error(ErrorCode::InvalidModel, [] { ModelDomain::with_radius(2.0, 1.0); });
  expect_error(ErrorCode::InvalidModel, [] { ModelDomain::with_radius(1.5, 2.0); });
}

TEST(Dilate, EuclideanWorkedCase) {
  const auto s = euclid(2);
  const Point r = dilate(s, Point{1.0, 1.0}, 0.5, Point{3.0, 1.0});
  EXPECT_DOUBLE_EQ(r[0], 2.0);
  EXPECT_DOUBLE_EQ(r[1], 1.0);
}

TEST(Dilate, UnitCoefficientAndCenterAreFixed) {
  const auto s = heisenberg();
  const Point x{0.3, -0.2, 0.7}, y{-0.1, 0.4, 0.2};
  EXPECT_EQ(dilate(s, x, 1.0, y), y);
  EXPECT_LE(max_abs_diff(dilate(s, x, 0.37, x), x), 1e-15);
}

TEST(Dilate, InputValidation) {
  const auto s = euclid(2);
  expect_error(ErrorCode::DimensionMismatch, [&] { dilate(s, Point{0.0}, 0.5, Point{1.0, 1.0}); });
  expect_error(ErrorCode::NonFiniteInput, [&] { dilate(s, Point{0.0, NAN}, 0.5, Point{1.0, 1.0}); });
}

TEST(ConeQuotient, EuclideanHomogeneity) {
  const auto s = euclid(2);
  EXPECT_NEAR(cone_quotient(s, Point{0.0, 0.0}, 0.25, Point{1.0, 0.0}, Point{0.0, 1.0}), std::sqrt(2.0), 1e-15);
  EXPECT_EQ(cone_quotient(s, Point{0.0, 0.0}, 0.25, Point{1.0, 0.0}, Point{1.0, 0.0}), 0.0);
}

TEST(ConeQuotient, HeisenbergConstantInEps) {
  const auto s = heisenberg();
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Point x = s.sample_point(rng), u = s.sample_near(x, 0.5, rng), v = s.sample_near(x, 0.5, rng);
    const double q1 = cone_quotient(s, x, 1.0, u, v);
    for (double e : {0.5, 0.1}) EXPECT_NEAR(cone_quotient(s, x, e, u, v), q1, 1e-12 * std::max(1.0, q1));
  }
}

TEST(ConeQuotient, RejectsFarPointsAndLargeEps) {
  const auto s = euclid(1);
  expect_error(ErrorCode::DomainViolation, [&] { cone_quotient(s, Point{0.0}, 0.5, Point{3.0}, Point{0.0}); });
  expect_error(ErrorCode::DomainViolation, [&] { cone_quotient(s, Point{0.0}, 2.0, Point{1.0}, Point{0.0}); });
}

// Closeness radius 3 admits the worked cases below.
auto wide_line() { return make_dilatation_structure(EuclideanGroup(1), ModelDomain::with_radius(4.0, 3.0)); }

TEST(Delta2, EuclideanWorkedCase) {
  // delta^{eps u}_{1/eps}(eps v) with x = 0: 0.5 + 2 (1 - 0.5) = 1.5
  const auto s = wide_line();
  EXPECT_NEAR(delta2(s, Point{0.0}, 0.5, Point{1.0}, Point{2.0})[0], 1.5, 1e-15);
}

TEST(Delta2, DegenerateArguments) {
  const auto s = heisenberg();
  const Point x{0.1, 0.2, -0.3}, u{0.4, -0.1, 0.2}, v{-0.2, 0.3, 0.1};
  EXPECT_LE(max_abs_diff(delta2(s, x, 0.3, x, v), v), 1e-14);
  EXPECT_EQ(delta2(s, x, 0.3, u, x), inv_eps(s, x, 0.3, u));
  EXPECT_LE(max_abs_diff(inv_eps(s, x, 0.3, x), x), 1e-15);
}

TEST(Delta2, RequiresCloseness) {
  const auto s = euclid(1);
  expect_error(ErrorCode::DomainViolation, [&] { delta2(s, Point{0.0}, 0.5, Point{1.9}, Point{0.0}); });
}

TEST(SigmaEps, EuclideanWorkedCase) {
  const auto s = wide_line();
  EXPECT_NEAR(sigma_eps(s, Point{0.0}, 0.1, Point{2.0}, Point{3.0})[0], 4.8, 1e-14);
  EXPECT_NEAR(sigma_eps(s, Point{0.0}, 0.1, Point{0.0}, Point{3.0})[0], 3.0, 1e-14);
}

// Sampled properties on every model.

template <typename S>
void check_inverse_and_semigroup(const S& s, std::uint64_t seed) {
  Rng rng(seed);
  for (int i = 0; i < 500; ++i) {
    const Point x = s.sample_point(rng);
    const Point y = s.sample_near(x, 0.5 * s.domain().closeness, rng);
    const double e = rng.uniform(0.05, 1.0), m = rng.uniform(0.05, 1.0);
    const Point back = dilate(s, x, 1.0 / e, dilate(s, x, e, y));
    EXPECT_LE(discrepancy(back, y), 1e-10) << s.name();
    const Point two = dilate(s, x, e, dilate(s, x, m, y));
    EXPECT_LE(discrepancy(two, dilate(s, x, e * m, y)), 1e-10) << s.name();
  }
}

TEST(CoreProperties, InverseAndSemigroupLaws) {
  check_inverse_and_semigroup(euclid(3, 1.0), 11);
  check_inverse_and_semigroup(heisenberg(), 12);
  check_inverse_and_semigroup(step2(), 13);
  check_inverse_and_semigroup(SphereStructure(), 14);
}

template <typename S>
void check_derived_operators(const S& s, std::uint64_t seed) {
  Rng rng(seed);
  const double r = 0.25 * s.domain().closeness;
  for (int i = 0; i < 200; ++i) {
    const Point x = s.sample_point(rng), u = s.sample_near(x, r, rng), v = s.sample_near(x, r, rng);
    const double e = rng.uniform(0.01, 1.0);
    const Point d = s.apply_dilatation(s.apply_dilatation(x, e, u), 1.0 / e, s.apply_dilatation(x, e, v));
    EXPECT_LE(discrepancy(delta2(s, x, e, u, v), d), 1e-14) << s.name();
    const Point sg = s.apply_dilatation(x, 1.0 / e, s.apply_dilatation(s.apply_dilatation(x, e, u), e, v));
    EXPECT_LE(discrepancy(sigma_eps(s, x, e, u, v), sg), 1e-14) << s.name();
  }
}

TEST(CoreProperties, DerivedOperatorsMatchCompositions) {
  check_derived_operators(euclid(2), 21);
  check_derived_operators(heisenberg(), 22);
  check_derived_operators(step2(), 23);
  check_derived_operators(SphereStructure(), 24);
}

TEST(CoreProperties, ConeQuotientConstantOnHomogeneousModels) {
  auto run = [](const auto& s, std::uint64_t seed) {
    Rng rng(seed);
    for (int i = 0; i < 50; ++i) {
      const Point x = s.sample_point(rng), u = s.sample_near(x, 0.5, rng), v = s.sample_near(x, 0.5, rng);
      const double q0 = cone_quotient(s, x, 1.0, u, v);
      double e = 1.0;
      for (int k = 0; k <= 10; ++k, e *= 0.5)
        EXPECT_LE(relative_gap(cone_quotient(s, x, e, u, v), q0), 1e-9) << s.name() << " eps=" << e;
    }
  };
  run(euclid(3, EuclideanGroup::kInfinity), 31);
  run(heisenberg(), 32);
  run(step2(), 33);
}

TEST(Discrepancy, ScalesAboveUnit) {
  EXPECT_DOUBLE_EQ(discrepancy(Point{100.0}, Point{101.0}), 1.0 / 101.0);
  EXPECT_DOUBLE_EQ(discrepancy(Point{0.1}, Point{0.2}), 0.1);
  expect_error(ErrorCode::DimensionMismatch, [] { discrepancy(Point{0.0}, Point{0.0, 0.0}); });
}
