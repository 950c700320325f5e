#pragma once

#include <vector>

#include <Eigen/Dense>

#include "ksstab/basis.hpp"
#include "ksstab/model.hpp"

namespace ksstab {

/// Exact solution on the unit torus built from three eigenfunctions:
///   y(t, x) = 3 + 2t/(t+1) + 10 cos^2(4t) cos(6 pi x) + (3t+2)^2 e^{-2t} sin(2 pi x).
///
/// At t = 0 the sin(2 pi x) amplitude is (3*0+2)^2 = 4.
namespace manufactured {

double exact_solution(double t, double x);

/// d^order/dx^order of the exact solution.
double exact_space_derivative(double t, double x, int order);

/// d/dt of the exact solution.
double exact_time_derivative(double t, double x);

/// Galerkin coordinates of y(t, .) in a periodic unit-length basis (needs N >= 7).
Eigen::VectorXd exact_coefficients(double t, int modes);

/// f = y_t + nu2 y_xxxx + nu1 y_xx + nu0 N(y), with N picked by params.kind.
double forcing(const ModelParams& params, double t, double x);

}  // namespace manufactured

struct ConvergenceOptions {
  int base_modes = 50;
  double base_dt = 1e-4;
  double base_x_step = 1e-3;
  double final_time = 0.5;
  int levels = 4;
  bool parallel = true;
};

struct ConvergenceLevel {
  int level = 0;
  int modes = 0;
  double dt = 0.0;
  double x_step = 0.0;
  double max_error = 0.0;  ///< max over steps of the L2 error
  double ratio = 0.0;      ///< previous level's max_error / this one; NaN on level 0
  std::vector<double> times;
  std::vector<double> errors;
};

/// Runs the forced free dynamics from the exact initial state and tracks the
/// L2 distance to the exact solution at every step (recording every
/// `record_every` steps).
ConvergenceLevel manufactured_run(const ModelParams& params, int modes, double dt, double x_step,
                                  double final_time, int record_every = 100);

/// Level rho uses N = N0 2^rho, dt = dt0 / 2^rho, x_step = x0 / 2^rho.
std::vector<ConvergenceLevel> convergence_study(const ModelParams& params, const ConvergenceOptions& options);

}  // namespace ksstab
