#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ksstab/femgrid.hpp"
#include "ksstab/manufactured.hpp"

namespace ksstab {
namespace {

constexpr double kPi = std::numbers::pi;

// Hand-expanded exact solution and its derivatives.
struct Reference {
  double t;
  double a() const { return 3.0 + 2.0 * t / (t + 1.0); }
  double b() const { return 10.0 * std::pow(std::cos(4.0 * t), 2); }
  double c() const { return std::pow(3.0 * t + 2.0, 2) * std::exp(-2.0 * t); }
  double y(double x) const { return a() + b() * std::cos(6 * kPi * x) + c() * std::sin(2 * kPi * x); }
  double y_x(double x) const {
    return -6 * kPi * b() * std::sin(6 * kPi * x) + 2 * kPi * c() * std::cos(2 * kPi * x);
  }
  double y_xx(double x) const {
    return -36 * kPi * kPi * b() * std::cos(6 * kPi * x) - 4 * kPi * kPi * c() * std::sin(2 * kPi * x);
  }
  double y_xxxx(double x) const {
    return std::pow(6 * kPi, 4) * b() * std::cos(6 * kPi * x) + std::pow(2 * kPi, 4) * c() * std::sin(2 * kPi * x);
  }
};

TEST(ExactSolution, InitialStateUsesTheFormula) {
  for (double x : {0.0, 0.1, 0.33, 0.8}) {
    EXPECT_NEAR(manufactured::exact_solution(0.0, x), 3.0 + 10.0 * std::cos(6 * kPi * x) + 4.0 * std::sin(2 * kPi * x),
                1e-13);
  }
  const Eigen::VectorXd z0 = manufactured::exact_coefficients(0.0, 10);
  EXPECT_EQ(z0(0), 3.0);
  EXPECT_EQ(z0(1), 4.0);
  EXPECT_EQ(z0(6), 10.0);
  EXPECT_EQ(z0.cwiseAbs().sum(), 17.0);
  EXPECT_THROW(manufactured::exact_coefficients(0.0, 6), std::invalid_argument);
}

TEST(ExactSolution, TimeDerivativeMatchesFiniteDifference) {
  const double eps = 1e-6;
  for (double t : {0.0, 0.3, 1.1}) {
    for (double x : {0.05, 0.5, 0.71}) {
      const double fd = (manufactured::exact_solution(t + eps, x) - manufactured::exact_solution(t - eps, x)) / (2 * eps);
      EXPECT_NEAR(manufactured::exact_time_derivative(t, x), fd, 1e-6);
    }
  }
  // At t = 0 the mean grows at rate 2/(t+1)^2 = 2 and cos^2(4t) is stationary.
  EXPECT_NEAR(manufactured::exact_time_derivative(0.0, 0.0), 2.0 + 0.0 + 0.0, 1e-12);
}

TEST(ExactSolution, SpatialDerivativesAndCoefficients) {
  const SpectralBasis basis(BoundaryKind::Periodic, 1.0, 12);
  const Grid grid(1e-3);
  for (double t : {0.0, 0.4, 1.5}) {
    const Reference ref{t};
    for (double x : {0.13, 0.62}) {
      EXPECT_NEAR(manufactured::exact_space_derivative(t, x, 0), ref.y(x), 1e-12);
      EXPECT_NEAR(manufactured::exact_space_derivative(t, x, 1), ref.y_x(x), 1e-10);
      EXPECT_NEAR(manufactured::exact_space_derivative(t, x, 2), ref.y_xx(x), 1e-9);
      EXPECT_NEAR(manufactured::exact_space_derivative(t, x, 4), ref.y_xxxx(x), 1e-5);
    }
    const auto sampled = grid.sample([&](double x) { return ref.y(x); });
    const auto projected = project_onto_modes(grid, basis, sampled, 12);
    const Eigen::VectorXd z = manufactured::exact_coefficients(t, 12);
    for (int i = 0; i < 12; ++i) EXPECT_NEAR(projected[i], z(i), 1e-10);
  }
}

TEST(ExactSolution, ForcingIsTheResidual) {
  for (auto params : {ModelParams::fluid_defaults(), ModelParams::flame_defaults()}) {
    for (double t : {0.0, 0.7}) {
      const Reference ref{t};
      for (double x : {0.2, 0.9}) {
        const double y_t = 2.0 / std::pow(t + 1.0, 2) + (-40.0 * std::sin(8.0 * t)) * std::cos(6 * kPi * x) +
                           2.0 * (3 * t + 2) * (1 - 3 * t) * std::exp(-2 * t) * std::sin(2 * kPi * x);
        const double nl = params.kind == ModelKind::Flame ? 0.5 * ref.y_x(x) * ref.y_x(x) : ref.y(x) * ref.y_x(x);
        const double expected = y_t + params.nu2 * ref.y_xxxx(x) + params.nu1 * ref.y_xx(x) + params.nu0 * nl;
        EXPECT_NEAR(manufactured::forcing(params, t, x), expected, 1e-9 * (1.0 + std::abs(expected)));
      }
    }
  }
}

TEST(ManufacturedRun, LinearProblemConvergesAtSecondOrder) {
  ModelParams params = ModelParams::fluid_defaults();
  params.nu0 = 0.0;
  ConvergenceOptions options;
  options.base_modes = 16;
  options.base_dt = 1e-3;
  options.base_x_step = 1e-2;
  options.final_time = 0.2;
  options.levels = 3;
  const auto levels = convergence_study(params, options);
  ASSERT_EQ(levels.size(), 3u);
  EXPECT_TRUE(std::isnan(levels[0].ratio));
  for (std::size_t k = 1; k < levels.size(); ++k) {
    EXPECT_EQ(levels[k].modes, 16 << k);
    EXPECT_NEAR(levels[k].dt, 1e-3 / (1 << k), 1e-18);
    EXPECT_NEAR(std::log2(levels[k].ratio), 2.0, 0.05);
  }
  EXPECT_GT(levels[0].max_error, 0.0);
  EXPECT_LT(levels[0].max_error, 1e-4);
}

TEST(ManufacturedRun, SerialAndParallelStudiesAgree) {
  ConvergenceOptions options;
  options.base_modes = 16;
  options.base_dt = 1e-3;
  options.base_x_step = 1e-2;
  options.final_time = 0.05;
  options.levels = 2;
  const auto parallel = convergence_study(ModelParams::flame_defaults(), options);
  options.parallel = false;
  const auto serial = convergence_study(ModelParams::flame_defaults(), options);
  for (std::size_t k = 0; k < serial.size(); ++k) EXPECT_EQ(serial[k].max_error, parallel[k].max_error);
}

}  // namespace
}  // namespace ksstab
