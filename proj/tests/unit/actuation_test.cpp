#include <cmath>
#include <stdexcept>

#include <gtest/gtest.h>

#include "ksstab/actuation.hpp"
#include "oracles.hpp"

namespace ksstab {
namespace {

TEST(Actuators, SingleActuatorSitsInTheMiddle) {
  const auto set = build_actuators(1, 0.2, 1.0);
  ASSERT_EQ(set.count(), 1);
  EXPECT_DOUBLE_EQ(set.center(1), 0.5);
  EXPECT_NEAR(set.support(1).lower, 0.4, 1e-15);
  EXPECT_NEAR(set.support(1).upper, 0.6, 1e-15);
  EXPECT_EQ(set.value(1, 0.5), 1.0);
  EXPECT_EQ(set.value(1, 0.39), 0.0);
}

TEST(Actuators, DefaultLayoutWith35Actuators) {
  const auto set = build_actuators(35, 0.2, 1.0);
  EXPECT_NEAR(set.center(1), 1.0 / 70.0, 1e-15);
  EXPECT_NEAR(set.support(1).measure(), 0.2 / 35.0, 1e-15);
  EXPECT_NEAR(set.half_width(), 0.1 / 35.0, 1e-16);
}

TEST(Actuators, TwoActuatorsAndOpenEndpoints) {
  const auto set = build_actuators(2, 0.5, 1.0);
  EXPECT_DOUBLE_EQ(set.center(1), 0.25);
  EXPECT_DOUBLE_EQ(set.center(2), 0.75);
  EXPECT_DOUBLE_EQ(set.support(1).lower, 0.125);
  EXPECT_DOUBLE_EQ(set.support(1).upper, 0.375);
  EXPECT_DOUBLE_EQ(set.support(2).lower, 0.625);
  EXPECT_DOUBLE_EQ(set.support(2).upper, 0.875);
  EXPECT_EQ(set.value(1, 0.375), 0.0);
  EXPECT_EQ(set.value(1, 0.125), 0.0);
  EXPECT_EQ(set.value(2, 0.7), 1.0);
}

TEST(Actuators, NormalizedIndicatorHasUnitNorm) {
  for (int m : {1, 4, 7}) {
    const auto set = build_actuators(m, 0.2, 1.0);
    EXPECT_NEAR(set.normalized_value(1, set.center(1)), std::sqrt(m / 0.2), 1e-14);
    EXPECT_EQ(set.normalized_value(1, set.center(1) + 2.0 * set.half_width()), 0.0);
    for (int j = 1; j <= m; ++j) {
      const auto s = set.support(j);
      const double norm2 = oracle::gauss_legendre(
          [&](double x) { return std::pow(set.normalized_value(j, x), 2); }, s.lower, s.upper, 8);
      EXPECT_NEAR(norm2, 1.0, 1e-13);
    }
  }
  EXPECT_NEAR(build_actuators(1, 0.2, 1.0).normalized_value(1, 0.5), 2.2360679774997896, 1e-15);
  EXPECT_NEAR(build_actuators(4, 0.2, 1.0).normalized_value(2, 0.375), std::sqrt(20.0), 1e-14);
}

TEST(Actuators, RejectsInvalidConfiguration) {
  EXPECT_THROW(build_actuators(0, 0.2, 1.0), std::invalid_argument);
  EXPECT_THROW(build_actuators(3, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(build_actuators(3, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(build_actuators(3, 1.5, 1.0), std::invalid_argument);
  EXPECT_THROW(build_actuators(3, 0.2, 0.0), std::invalid_argument);
  const auto set = build_actuators(3, 0.2, 1.0);
  EXPECT_THROW(set.value(0, 0.5), std::out_of_range);
  EXPECT_THROW(set.center(4), std::out_of_range);
}

class ActuatorLayout : public ::testing::TestWithParam<double> {};

TEST_P(ActuatorLayout, DisjointMirroredAndMeasurePreserving) {
  const double r = GetParam();
  for (double length : {1.0, 3.0}) {
    for (int m = 1; m <= 512; ++m) {
      const auto set = build_actuators(m, r, length);
      double measure = 0.0;
      for (int j = 1; j <= m; ++j) {
        const auto s = set.support(j);
        measure += s.measure();
        EXPECT_GT(s.lower, 0.0);
        EXPECT_LT(s.upper, length);
        EXPECT_EQ(set.center(m + 1 - j) + set.center(j), length) << "M=" << m << " j=" << j;
        if (j < m) {
          EXPECT_LT(set.center(j), set.center(j + 1));
          EXPECT_LE(s.upper, set.support(j + 1).lower);
        }
      }
      EXPECT_NEAR(measure, r * length, 1e-12 * length);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Fractions, ActuatorLayout, ::testing::Values(0.1, 0.2, 0.5, 0.9));

}  // namespace
}  // namespace ksstab
