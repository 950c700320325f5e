#include "ksstab/basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ksstab {

namespace {

constexpr double kPi = std::numbers::pi;

// d^order/dtheta^order of cos(theta) or sin(theta), cycling through the four phases.
double trig_derivative(bool sine, double theta, int order) {
  const int phase = (order + (sine ? 3 : 0)) % 4;
  switch (phase) {
    case 0: return std::cos(theta);
    case 1: return -std::sin(theta);
    case 2: return -std::cos(theta);
    default: return std::sin(theta);
  }
}

}  // namespace

void ModelParams::validate() const {
  if (!std::isfinite(nu2) || !std::isfinite(nu1) || !std::isfinite(nu0)) {
    throw std::invalid_argument("model coefficients must be finite");
  }
  if (nu2 <= 0.0) {
    throw std::invalid_argument("nu2 must be strictly positive (got " + std::to_string(nu2) + ")");
  }
}

ModelParams ModelParams::fluid_defaults() {
  return ModelParams{ModelKind::Fluid, 1e-6, 1e-2, 1.0, ForcingKind::Zero};
}

ModelParams ModelParams::flame_defaults() {
  return ModelParams{ModelKind::Flame, 1e-6, 1e-2, 1e-2, ForcingKind::Zero};
}

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::Flame ? "flame" : "fluid";
}

std::string_view to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::Periodic: return "periodic";
    case BoundaryKind::Dirichlet: return "dirichlet";
    case BoundaryKind::Neumann: return "neumann";
  }
  return "unknown";
}

SpectralBasis::SpectralBasis(BoundaryKind bc, double length, int modes)
    : bc_(bc), length_(length), modes_(modes) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("basis length must be positive");
  }
  if (modes < 1) {
    throw std::invalid_argument("basis needs at least one mode");
  }
}

void SpectralBasis::check_index(int i) const {
  if (i < 1 || i > modes_) {
    throw std::out_of_range("mode index " + std::to_string(i) + " outside [1, " +
                            std::to_string(modes_) + "]");
  }
}

void SpectralBasis::check_point(double x) const {
  if (!(x >= 0.0 && x < length_)) {
    throw std::domain_error("point " + std::to_string(x) + " outside [0, L)");
  }
}

double SpectralBasis::frequency_unchecked(int i) const noexcept {
  switch (bc_) {
    case BoundaryKind::Periodic: return 2.0 * kPi * static_cast<double>(i / 2) / length_;
    case BoundaryKind::Dirichlet: return kPi * static_cast<double>(i) / length_;
    case BoundaryKind::Neumann: return kPi * static_cast<double>(i - 1) / length_;
  }
  return 0.0;
}

double SpectralBasis::frequency(int i) const {
  check_index(i);
  return frequency_unchecked(i);
}

bool SpectralBasis::is_sine(int i) const {
  check_index(i);
  switch (bc_) {
    case BoundaryKind::Periodic: return i % 2 == 0;
    case BoundaryKind::Dirichlet: return true;
    case BoundaryKind::Neumann: return false;
  }
  return false;
}

double SpectralBasis::eigenfunction(int i, double x) const {
  return derivative(i, x, 0);
}

double SpectralBasis::derivative(int i, double x, int order) const {
  check_index(i);
  check_point(x);
  if (order < 0) throw std::invalid_argument("derivative order must be nonnegative");
  const double k = frequency_unchecked(i);
  if (k == 0.0) return order == 0 ? 1.0 : 0.0;
  return std::pow(k, order) * trig_derivative(is_sine(i), k * x, order);
}

double SpectralBasis::normalization(int i) const {
  check_index(i);
  const bool constant = frequency_unchecked(i) == 0.0;
  return std::sqrt((constant ? 1.0 : 2.0) / length_);
}

double SpectralBasis::normalized_eigenfunction(int i, double x) const {
  return normalization(i) * eigenfunction(i, x);
}

double SpectralBasis::squared_norm(int i) const {
  check_index(i);
  return frequency_unchecked(i) == 0.0 ? length_ : 0.5 * length_;
}

double SpectralBasis::laplacian_eigenvalue(int i) const {
  check_index(i);
  const double k = frequency_unchecked(i);
  return k * k;
}

double ks_growth_rate(const ModelParams& params, const SpectralBasis& basis, int i) {
  const double mu = basis.laplacian_eigenvalue(i);
  return -params.nu2 * mu * mu + params.nu1 * mu;
}

int count_unstable_modes(const ModelParams& params, const SpectralBasis& basis) {
  if (ks_growth_rate(params, basis, basis.modes()) >= 0.0) {
    throw std::domain_error("basis with " + std::to_string(basis.modes()) +
                            " modes does not bracket the unstable spectrum");
  }
  int count = 0;
  for (int i = 1; i <= basis.modes(); ++i) {
    if (ks_growth_rate(params, basis, i) >= 0.0) ++count;
  }
  return count;
}

}  // namespace ksstab
