#include "ksstab/manufactured.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ksstab/diagnostics.hpp"
#include "ksstab/femgrid.hpp"
#include "ksstab/galerkin.hpp"
#include "ksstab/simulation.hpp"

namespace ksstab {

namespace manufactured {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHigh = 6.0 * kPi;  // cos(6 pi x) frequency
constexpr double kLow = 2.0 * kPi;   // sin(2 pi x) frequency

struct Amplitudes {
  double mean;
  double cosine;
  double sine;
};

Amplitudes amplitudes(double t) {
  const double growth = 3.0 * t + 2.0;
  const double c = std::cos(4.0 * t);
  return {3.0 + 2.0 * t / (t + 1.0), 10.0 * c * c, growth * growth * std::exp(-2.0 * t)};
}

Amplitudes amplitude_rates(double t) {
  const double growth = 3.0 * t + 2.0;
  return {2.0 / ((t + 1.0) * (t + 1.0)), -40.0 * std::sin(8.0 * t),
          2.0 * growth * (1.0 - 3.0 * t) * std::exp(-2.0 * t)};
}

// d^order/dtheta^order of cos or sin.
double trig(bool sine, double theta, int order) {
  const int phase = (order + (sine ? 3 : 0)) % 4;
  switch (phase) {
    case 0: return std::cos(theta);
    case 1: return -std::sin(theta);
    case 2: return -std::cos(theta);
    default: return std::sin(theta);
  }
}

double combine(const Amplitudes& a, double x, int order) {
  const double mean = order == 0 ? a.mean : 0.0;
  return mean + a.cosine * std::pow(kHigh, order) * trig(false, kHigh * x, order) +
         a.sine * std::pow(kLow, order) * trig(true, kLow * x, order);
}

}  // namespace

double exact_solution(double t, double x) { return combine(amplitudes(t), x, 0); }

double exact_space_derivative(double t, double x, int order) {
  if (order < 0) throw std::invalid_argument("derivative order must be nonnegative");
  return combine(amplitudes(t), x, order);
}

double exact_time_derivative(double t, double x) { return combine(amplitude_rates(t), x, 0); }

Eigen::VectorXd exact_coefficients(double t, int modes) {
  if (modes < 7) throw std::invalid_argument("exact solution needs at least 7 periodic modes");
  const Amplitudes a = amplitudes(t);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(modes);
  z(0) = a.mean;    // e_1 = 1
  z(1) = a.sine;    // e_2 = sin(2 pi x)
  z(6) = a.cosine;  // e_7 = cos(6 pi x)
  return z;
}

double forcing(const ModelParams& params, double t, double x) {
  const Amplitudes a = amplitudes(t);
  const double value = combine(a, x, 0);
  const double slope = combine(a, x, 1);
  return exact_time_derivative(t, x) + params.nu2 * combine(a, x, 4) + params.nu1 * combine(a, x, 2) +
         params.nu0 * pointwise_nonlinearity(params.kind, value, slope);
}

}  // namespace manufactured

ConvergenceLevel manufactured_run(const ModelParams& params, int modes, double dt, double x_step,
                                  double final_time, int record_every) {
  ModelParams forced = params;
  forced.forcing = ForcingKind::Manufactured;
  const SpectralBasis basis(BoundaryKind::Periodic, 1.0, modes);
  const GalerkinSpace space(basis, Grid(x_step));
  const long steps = step_count(final_time, dt);

  ImexIntegrator integrator(forced, space, dt, nullptr,
                            [forced](double t, double x) { return manufactured::forcing(forced, t, x); });
  integrator.reset(0.0, manufactured::exact_coefficients(0.0, modes));

  ConvergenceLevel result;
  result.modes = modes;
  result.dt = dt;
  result.x_step = x_step;
  result.ratio = std::numeric_limits<double>::quiet_NaN();
  auto record = [&](long k) {
    const double t = integrator.time();
    const double err = l2_distance(basis, integrator.states().col(0), manufactured::exact_coefficients(t, modes));
    result.max_error = std::max(result.max_error, err);
    if (record_every > 0 && (k % record_every == 0 || k == steps)) {
      result.times.push_back(t);
      result.errors.push_back(err);
    }
  };
  record(0);
  for (long k = 1; k <= steps; ++k) {
    integrator.advance();
    record(k);
  }
  return result;
}

std::vector<ConvergenceLevel> convergence_study(const ModelParams& params, const ConvergenceOptions& options) {
  if (options.levels < 1) throw std::invalid_argument("convergence study needs at least one level");
  auto level_run = [&](int rho) {
    const double scale = std::ldexp(1.0, rho);
    ConvergenceLevel level = manufactured_run(params, options.base_modes << rho, options.base_dt / scale,
                                              options.base_x_step / scale, options.final_time,
                                              100 << rho);
    level.level = rho;
    return level;
  };

  std::vector<ConvergenceLevel> levels;
  if (options.parallel) {
    std::vector<std::future<ConvergenceLevel>> pending;
    for (int rho = 0; rho < options.levels; ++rho) pending.push_back(std::async(std::launch::async, level_run, rho));
    for (auto& f : pending) levels.push_back(f.get());
  } else {
    for (int rho = 0; rho < options.levels; ++rho) levels.push_back(level_run(rho));
  }
  for (std::size_t k = 1; k < levels.size(); ++k) {
    levels[k].ratio = levels[k - 1].max_error / levels[k].max_error;
  }
  return levels;
}

}  // namespace ksstab
