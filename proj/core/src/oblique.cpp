#include "ksstab/oblique.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace ksstab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDiagonalTolerance = 1e-10;

void check_compatible(const SpectralBasis& basis, const ActuatorSet& actuators, int rows) {
  if (std::abs(basis.length() - actuators.length()) > 1e-12 * basis.length()) {
    throw std::invalid_argument("basis and actuators live on different domains");
  }
  if (rows < 1 || rows > basis.modes()) {
    throw std::out_of_range("Gram matrix needs " + std::to_string(rows) + " modes but basis has " +
                            std::to_string(basis.modes()));
  }
}

double sinc_squared(double t) {
  const double s = std::sin(t) / t;
  return s * s;
}

}  // namespace

double eigenfunction_actuator_integral(const SpectralBasis& basis, int i, const ActuatorSet& actuators,
                                       int j) {
  const double k = basis.frequency(i);
  const double c = actuators.center(j);
  const double h = actuators.half_width();
  if (k == 0.0) return 2.0 * h;
  // int_{c-h}^{c+h} cos(kx) dx = (2/k) sin(kh) cos(kc),  same with sin(kc) for sin(kx).
  const double amplitude = 2.0 / k * std::sin(k * h);
  return amplitude * (basis.is_sine(i) ? std::sin(k * c) : std::cos(k * c));
}

Eigen::MatrixXd gram_matrix(const SpectralBasis& basis, const ActuatorSet& actuators, int rows) {
  check_compatible(basis, actuators, rows);
  const int cols = actuators.count();
  Eigen::MatrixXd gram(rows, cols);
  for (int i = 1; i <= rows; ++i) {
    for (int j = 1; j <= cols; ++j) {
      gram(i - 1, j - 1) = eigenfunction_actuator_integral(basis, i, actuators, j);
    }
  }
  return gram;
}

Eigen::MatrixXd gram_matrix(const SpectralBasis& basis, const ActuatorSet& actuators) {
  return gram_matrix(basis, actuators, actuators.count());
}

ObliqueProjector::ObliqueProjector(const SpectralBasis& basis, ActuatorSet actuators)
    : basis_(basis.truncated(actuators.count())), actuators_(std::move(actuators)) {
  check_compatible(basis, actuators_, actuators_.count());
  gram_ = gram_matrix(basis_, actuators_);
  lu_.compute(gram_);

  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram_);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  condition_ = smallest > 0.0 ? sv(0) / smallest : std::numeric_limits<double>::infinity();
  if (!std::isfinite(condition_)) condition_ = std::numeric_limits<double>::infinity();
}

Eigen::VectorXd ObliqueProjector::solve(const Eigen::Ref<const Eigen::VectorXd>& moments) const {
  if (moments.size() != size()) {
    throw std::invalid_argument("expected " + std::to_string(size()) + " moments, got " +
                                std::to_string(moments.size()));
  }
  if (!(condition_ < kDirectSumConditionLimit)) {
    throw SingularGramError("eigenfunction/actuator Gram matrix is numerically singular (condition " +
                                std::to_string(condition_) + ")",
                            condition_);
  }
  return lu_.solve(moments);
}

DirectSumCertificate certify_direct_sum(const ObliqueProjector& projector) {
  const double cond = projector.condition();
  const bool ok = projector.gram().allFinite() && std::isfinite(cond) && cond < kDirectSumConditionLimit;
  return {ok, cond};
}

Eigen::MatrixXd normalized_gram(const ObliqueProjector& projector) {
  const auto& basis = projector.basis();
  Eigen::MatrixXd b = projector.gram() * projector.actuators().normalization();
  for (int i = 1; i <= projector.size(); ++i) b.row(i - 1) *= basis.normalization(i);
  return b;
}

Eigen::MatrixXd theta_matrix(const ObliqueProjector& projector) {
  const Eigen::MatrixXd b = normalized_gram(projector);
  return b * b.transpose();
}

double min_theta_eigenvalue_numeric(const ObliqueProjector& projector) {
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(theta_matrix(projector),
                                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double min_theta_eigenvalue(const ObliqueProjector& projector) {
  if (projector.basis().bc() == BoundaryKind::Periodic) {
    const Eigen::MatrixXd theta = theta_matrix(projector);
    const Eigen::VectorXd diag = theta.diagonal();
    const Eigen::MatrixXd off = theta - Eigen::MatrixXd(diag.asDiagonal());
    if (off.cwiseAbs().maxCoeff() <= kDiagonalTolerance * diag.cwiseAbs().maxCoeff()) {
      return diag.minCoeff();
    }
  }
  return min_theta_eigenvalue_numeric(projector);
}

double min_theta_closed_form(int count, double fraction) {
  if (count < 1) throw std::invalid_argument("actuator count must be >= 1");
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("fraction r must lie in (0, 1)");
  if (count <= 2) return fraction;
  const double m = static_cast<double>(count);
  const double n = count % 2 == 1 ? m - 1.0 : m - 2.0;
  return fraction * sinc_squared(n * fraction * kPi / (2.0 * m));
}

std::vector<double> theta_eigenvalues_closed_form(int count, double fraction) {
  if (count < 1) throw std::invalid_argument("actuator count must be >= 1");
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("fraction r must lie in (0, 1)");
  const double m = static_cast<double>(count);
  const double delta = fraction * kPi / m;
  std::vector<double> eig{fraction};
  // Each frequency n < M/2 contributes a sin/cos pair with eigenvalue
  // M^2 / (r pi^2) (sin(n delta) / n)^2; n = M/2 (even M) contributes a single sine.
  for (int n = 1; 2 * n < count; ++n) {
    const double value = fraction * sinc_squared(static_cast<double>(n) * delta);
    eig.push_back(value);
    eig.push_back(value);
  }
  if (count % 2 == 0) {
    eig.push_back(2.0 * fraction * sinc_squared(fraction * kPi / 2.0));
  }
  std::sort(eig.begin(), eig.end());
  return eig;
}

double theta_infinity(double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("fraction r must lie in (0, 1)");
  return fraction * sinc_squared(fraction * kPi / 2.0);
}

double projection_norm(const ObliqueProjector& projector) {
  const auto cert = certify_direct_sum(projector);
  if (!cert.ok) {
    throw SingularGramError("oblique projection is not well defined (condition " +
                                std::to_string(cert.condition) + ")",
                            cert.condition);
  }
  return 1.0 / std::sqrt(min_theta_eigenvalue(projector));
}

double center_cos_sum(int frequency, int count) {
  double sum = 0.0;
  for (int k = 1; k <= count; ++k) {
    sum += std::cos(static_cast<double>(frequency) * static_cast<double>(2 * k - 1) * kPi /
                    static_cast<double>(count));
  }
  return sum;
}

double center_sin_sum(int frequency, int count) {
  double sum = 0.0;
  for (int k = 1; k <= count; ++k) {
    sum += std::sin(static_cast<double>(frequency) * static_cast<double>(2 * k - 1) * kPi /
                    static_cast<double>(count));
  }
  return sum;
}

GridObliqueProjector::GridObliqueProjector(const ObliqueProjector& projector, const Grid& grid)
    : grid_(grid), mass_(grid), count_(projector.size()) {
  if (std::abs(grid.length() - projector.basis().length()) > 1e-12 * grid.length()) {
    throw std::invalid_argument("grid and projector live on different domains");
  }
  const int nodes = grid.size();
  modes_.resize(nodes, count_);
  actuators_.resize(nodes, count_);
  for (int n = 0; n < nodes; ++n) {
    const double x = grid.node(n);
    for (int i = 1; i <= count_; ++i) {
      modes_(n, i - 1) = projector.basis().eigenfunction(i, x);
      actuators_(n, i - 1) = projector.actuators().value(i, x);
    }
  }
  Eigen::MatrixXd mass_actuators(nodes, count_);
  for (int j = 0; j < count_; ++j) {
    mass_.apply(std::span<const double>(actuators_.col(j).data(), static_cast<std::size_t>(nodes)),
                std::span<double>(mass_actuators.col(j).data(), static_cast<std::size_t>(nodes)));
  }
  gram_ = modes_.transpose() * mass_actuators;
  lu_.compute(gram_);
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(gram_);
  const auto& sv = svd.singularValues();
  if (!(sv(sv.size() - 1) > 0.0) || sv(0) / sv(sv.size() - 1) >= kDirectSumConditionLimit) {
    throw SingularGramError("grid too coarse to resolve the actuators", sv(0) / sv(sv.size() - 1));
  }
}

std::span<const double> GridObliqueProjector::actuator(int j) const {
  if (j < 1 || j > count_) throw std::out_of_range("actuator index out of range");
  return {actuators_.col(j - 1).data(), static_cast<std::size_t>(grid_.size())};
}

ProjectionResult GridObliqueProjector::apply(std::span<const double> h) const {
  const std::vector<double> mh = mass_.apply(h);
  const Eigen::Map<const Eigen::VectorXd> mh_vec(mh.data(), static_cast<Eigen::Index>(mh.size()));
  const Eigen::VectorXd moments = modes_.transpose() * mh_vec;
  ProjectionResult result;
  result.amplitudes = lu_.solve(moments);
  const Eigen::VectorXd values = actuators_ * result.amplitudes;
  result.values.assign(values.data(), values.data() + values.size());
  return result;
}

ProjectionResult apply_projection(const GridObliqueProjector& projector, std::span<const double> h) {
  return projector.apply(h);
}

}  // namespace ksstab
