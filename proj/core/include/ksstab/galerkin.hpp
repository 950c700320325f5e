#pragma once

#include <span>

#include <Eigen/Dense>

#include "ksstab/basis.hpp"
#include "ksstab/femgrid.hpp"
#include "ksstab/model.hpp"

namespace ksstab {

/// Spectral Galerkin space span{e_1..e_N} (periodic) paired with the
/// quadrature grid used to evaluate and L2-project pointwise terms.
///
/// Holds a nodes x (N + 1) table of sampled eigenfunctions. The extra column
/// is the cosine partner of the last sine mode when N is even, which the
/// first derivative of e_N needs.
class GalerkinSpace {
 public:
  GalerkinSpace(const SpectralBasis& basis, const Grid& grid);

  const SpectralBasis& basis() const noexcept { return basis_; }
  const Grid& grid() const noexcept { return grid_; }
  const MassMatrix& mass() const noexcept { return mass_; }
  int modes() const noexcept { return basis_.modes(); }
  int nodes() const noexcept { return grid_.size(); }

  /// Coefficients of d^order z / dx^order against e_1..e_{N+1}.
  Eigen::VectorXd differentiate(const Eigen::Ref<const Eigen::VectorXd>& coeffs, int order) const;

  /// sum_n z_n d^order e_n / dx^order at the grid nodes.
  Eigen::VectorXd evaluate(const Eigen::Ref<const Eigen::VectorXd>& coeffs, int order = 0) const;

  /// Column-wise evaluation of several coefficient vectors (N x k) at once.
  Eigen::MatrixXd evaluate_columns(const Eigen::Ref<const Eigen::MatrixXd>& coeffs, int order = 0) const;

  /// Evaluates coefficient columns given against e_1..e_{N+1} (see differentiate()).
  Eigen::MatrixXd evaluate_extended(const Eigen::Ref<const Eigen::MatrixXd>& extended) const;

  /// c_n = (f, e_n)_M / (e_n, e_n)_M for every column of f (nodes x k).
  Eigen::MatrixXd project_columns(const Eigen::Ref<const Eigen::MatrixXd>& values) const;
  Eigen::VectorXd project(std::span<const double> values) const;

  /// Discrete squared norm (e_n, e_n)_M.
  double discrete_squared_norm(int n) const { return discrete_norms_(n - 1); }

 private:
  SpectralBasis basis_;
  Grid grid_;
  MassMatrix mass_;
  Eigen::MatrixXd table_;           // nodes x (N + 1)
  Eigen::VectorXd discrete_norms_;  // (e_n, e_n)_M, n = 1..N
};

/// nu0 * P_N(N(z)) in spectral coordinates for each column of `coeffs`
/// (flame: |z_x|^2 / 2, fluid: z z_x), evaluated pointwise on the grid.
Eigen::MatrixXd nonlinearity_columns(const ModelParams& params, const GalerkinSpace& space,
                                     const Eigen::Ref<const Eigen::MatrixXd>& coeffs);

Eigen::VectorXd nonlinearity(const ModelParams& params, const GalerkinSpace& space,
                             const Eigen::Ref<const Eigen::VectorXd>& coeffs);

/// The pointwise (unprojected) nonlinear term for a model kind.
double pointwise_nonlinearity(ModelKind kind, double value, double slope);

}  // namespace ksstab
