#include "ksstab/galerkin.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ksstab {

GalerkinSpace::GalerkinSpace(const SpectralBasis& basis, const Grid& grid)
    : basis_(basis), grid_(grid), mass_(grid) {
  if (basis.bc() != BoundaryKind::Periodic) {
    throw std::invalid_argument("Galerkin time stepping supports periodic bases only");
  }
  if (std::abs(grid.length() - basis.length()) > 1e-12 * basis.length()) {
    throw std::invalid_argument("grid and basis lengths differ");
  }
  const int n_modes = basis.modes();
  // The highest frequency must stay below the grid Nyquist limit so the
  // sampled modes remain mass-orthogonal.
  if (n_modes + 1 >= grid.size()) {
    throw std::invalid_argument("grid with " + std::to_string(grid.size()) + " nodes cannot resolve " +
                                std::to_string(n_modes) + " modes");
  }
  const SpectralBasis extended = basis.truncated(n_modes + 1);
  table_.resize(grid.size(), n_modes + 1);
  for (int i = 1; i <= n_modes + 1; ++i) {
    for (int n = 0; n < grid.size(); ++n) table_(n, i - 1) = extended.eigenfunction(i, grid.node(n));
  }
  discrete_norms_.resize(n_modes);
  std::vector<double> mode(static_cast<std::size_t>(grid.size()));
  for (int i = 0; i < n_modes; ++i) {
    Eigen::Map<Eigen::VectorXd>(mode.data(), grid.size()) = table_.col(i);
    discrete_norms_(i) = mass_.inner_product(mode, mode);
  }
}

Eigen::VectorXd GalerkinSpace::differentiate(const Eigen::Ref<const Eigen::VectorXd>& coeffs,
                                             int order) const {
  const int n_modes = modes();
  if (coeffs.size() != n_modes) {
    throw std::invalid_argument("coefficient vector has wrong length");
  }
  if (order < 0) throw std::invalid_argument("derivative order must be nonnegative");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_modes + 1);
  out.head(n_modes) = coeffs;
  if (order == 0) return out;
  const SpectralBasis extended = basis_.truncated(n_modes + 1);
  out(0) = 0.0;
  for (int d = 0; d < order; ++d) {
    // Pair (sin slot 2k, cos slot 2k+1) with frequency kappa:
    // (a sin + b cos)' = -kappa b sin + kappa a cos.
    for (int s = 2; s <= n_modes + 1; s += 2) {
      const double kappa = extended.frequency(s);
      const double a = out(s - 1);
      const double b = s + 1 <= n_modes + 1 ? out(s) : 0.0;
      out(s - 1) = -kappa * b;
      if (s + 1 <= n_modes + 1) out(s) = kappa * a;
    }
  }
  return out;
}

Eigen::VectorXd GalerkinSpace::evaluate(const Eigen::Ref<const Eigen::VectorXd>& coeffs, int order) const {
  if (order == 0) {
    if (coeffs.size() != modes()) throw std::invalid_argument("coefficient vector has wrong length");
    return table_.leftCols(modes()) * coeffs;
  }
  return table_ * differentiate(coeffs, order);
}

Eigen::MatrixXd GalerkinSpace::evaluate_columns(const Eigen::Ref<const Eigen::MatrixXd>& coeffs,
                                                int order) const {
  if (coeffs.rows() != modes()) throw std::invalid_argument("coefficient matrix has wrong row count");
  if (order == 0) return table_.leftCols(modes()) * coeffs;
  Eigen::MatrixXd derived(modes() + 1, coeffs.cols());
  for (Eigen::Index c = 0; c < coeffs.cols(); ++c) derived.col(c) = differentiate(coeffs.col(c), order);
  return table_ * derived;
}

Eigen::MatrixXd GalerkinSpace::evaluate_extended(const Eigen::Ref<const Eigen::MatrixXd>& extended) const {
  if (extended.rows() != modes() + 1) throw std::invalid_argument("extended coefficients need N + 1 rows");
  return table_ * extended;
}

Eigen::MatrixXd GalerkinSpace::project_columns(const Eigen::Ref<const Eigen::MatrixXd>& values) const {
  if (values.rows() != nodes()) throw std::invalid_argument("grid function has wrong length");
  const Eigen::Index n = values.rows();
  const double diag = mass_.diagonal();
  const double off = mass_.off_diagonal();
  Eigen::MatrixXd mass_values(n, values.cols());
  for (Eigen::Index c = 0; c < values.cols(); ++c) {
    auto in = values.col(c);
    auto out = mass_values.col(c);
    out(0) = diag * in(0) + off * (in(n - 1) + in(1));
    out.segment(1, n - 2) = diag * in.segment(1, n - 2) + off * (in.segment(0, n - 2) + in.segment(2, n - 2));
    out(n - 1) = diag * in(n - 1) + off * (in(n - 2) + in(0));
  }
  Eigen::MatrixXd coeffs = table_.leftCols(modes()).transpose() * mass_values;
  return discrete_norms_.cwiseInverse().asDiagonal() * coeffs;
}

Eigen::VectorXd GalerkinSpace::project(std::span<const double> values) const {
  const Eigen::Map<const Eigen::VectorXd> v(values.data(), static_cast<Eigen::Index>(values.size()));
  return project_columns(v);
}

double pointwise_nonlinearity(ModelKind kind, double value, double slope) {
  return kind == ModelKind::Flame ? 0.5 * slope * slope : value * slope;
}

Eigen::MatrixXd nonlinearity_columns(const ModelParams& params, const GalerkinSpace& space,
                                     const Eigen::Ref<const Eigen::MatrixXd>& coeffs) {
  const Eigen::Index k = coeffs.cols();
  if (params.kind == ModelKind::Flame) {
    const Eigen::MatrixXd slope = space.evaluate_columns(coeffs, 1);
    return space.project_columns((0.5 * params.nu0) * slope.array().square().matrix());
  }
  // Evaluate values and slopes through one table product.
  Eigen::MatrixXd stacked(space.modes() + 1, 2 * k);
  for (Eigen::Index c = 0; c < k; ++c) {
    stacked.col(c) = space.differentiate(coeffs.col(c), 0);
    stacked.col(k + c) = space.differentiate(coeffs.col(c), 1);
  }
  const Eigen::MatrixXd fields = space.evaluate_extended(stacked);
  const Eigen::MatrixXd products =
      params.nu0 * (fields.leftCols(k).array() * fields.rightCols(k).array()).matrix();
  return space.project_columns(products);
}

Eigen::VectorXd nonlinearity(const ModelParams& params, const GalerkinSpace& space,
                             const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  return nonlinearity_columns(params, space, coeffs);
}

}  // namespace ksstab
