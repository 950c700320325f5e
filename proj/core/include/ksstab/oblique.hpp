#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ksstab/actuation.hpp"
#include "ksstab/basis.hpp"
#include "ksstab/femgrid.hpp"

namespace ksstab {

/// Condition number above which the eigenfunction/actuator Gram matrix is
/// treated as numerically singular.
inline constexpr double kDirectSumConditionLimit = 1e12;

class SingularGramError : public std::runtime_error {
 public:
  SingularGramError(const std::string& what, double condition)
      : std::runtime_error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// Exact integral of e_i over the support of actuator j.
double eigenfunction_actuator_integral(const SpectralBasis& basis, int i, const ActuatorSet& actuators,
                                       int j);

/// rows x M matrix with entry (i, j) = (e_i, 1_{omega_j})_{L2}, from closed-form antiderivatives.
Eigen::MatrixXd gram_matrix(const SpectralBasis& basis, const ActuatorSet& actuators, int rows);
Eigen::MatrixXd gram_matrix(const SpectralBasis& basis, const ActuatorSet& actuators);

/// Oblique projection onto span{1_{omega_j}} along span{e_1..e_M}^perp.
///
/// Built from the exact M x M Gram matrix G. For a function h with moments
/// m_i = (e_i, h), the projection is sum_j u_j 1_{omega_j} with G u = m.
/// Immutable once built; solve() is reentrant.
class ObliqueProjector {
 public:
  ObliqueProjector(const SpectralBasis& basis, ActuatorSet actuators);

  int size() const noexcept { return actuators_.count(); }
  const SpectralBasis& basis() const noexcept { return basis_; }
  const ActuatorSet& actuators() const noexcept { return actuators_; }
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }

  /// 2-norm condition number of the Gram matrix.
  double condition() const noexcept { return condition_; }

  /// Actuator amplitudes u with G u = moments. Throws SingularGramError when
  /// the Gram matrix failed certification.
  Eigen::VectorXd solve(const Eigen::Ref<const Eigen::VectorXd>& moments) const;

 private:
  SpectralBasis basis_;
  ActuatorSet actuators_;
  Eigen::MatrixXd gram_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
  double condition_;
};

struct DirectSumCertificate {
  bool ok;
  double condition;
};

/// ok iff the Gram matrix is finite and its condition number is below
/// kDirectSumConditionLimit.
DirectSumCertificate certify_direct_sum(const ObliqueProjector& projector);

/// Gram matrix between the L2-normalized eigenfunctions and actuators.
Eigen::MatrixXd normalized_gram(const ObliqueProjector& projector);

/// Theta = B B^T with B the normalized Gram matrix. Diagonal for periodic bases.
Eigen::MatrixXd theta_matrix(const ObliqueProjector& projector);

/// Smallest eigenvalue of Theta. Periodic: read from the diagonal after
/// checking diagonality; otherwise (or if that check fails) a symmetric
/// eigensolver is used.
double min_theta_eigenvalue(const ObliqueProjector& projector);

/// Smallest Theta eigenvalue from a dense symmetric eigensolver, for any basis.
double min_theta_eigenvalue_numeric(const ObliqueProjector& projector);

/// Closed form of min Eig(Theta) for periodic actuators:
///   r                                          M in {1, 2}
///   r (2M / ((M-1) r pi))^2 sin^2((M-1) r pi / (2M))   odd M >= 3
///   r (2M / ((M-2) r pi))^2 sin^2((M-2) r pi / (2M))   even M >= 4
double min_theta_closed_form(int count, double fraction);

/// Every Theta eigenvalue (with multiplicity, ascending) for periodic actuators.
std::vector<double> theta_eigenvalues_closed_form(int count, double fraction);

/// Large-M limit r (2 / (r pi))^2 sin^2(r pi / 2).
double theta_infinity(double fraction);

/// Operator norm of the oblique projection in L2: (min Eig Theta)^{-1/2}.
double projection_norm(const ObliqueProjector& projector);

/// sum_{k=1}^{M} cos(m chat_k) and sin(...), chat_k = 2 pi c_k / L = (2k - 1) pi / M.
double center_cos_sum(int frequency, int count);
double center_sin_sum(int frequency, int count);

struct ProjectionResult {
  Eigen::VectorXd amplitudes;  ///< u_j
  std::vector<double> values;  ///< sum_j u_j 1_{omega_j} at the grid nodes
};

/// The oblique projection acting on grid functions.
///
/// Uses the hat-function mass matrix for the moments and samples the
/// actuators at the nodes, so the operator is an exact projection on grid
/// functions: applying it twice reproduces the first result, and the
/// residual is mass-orthogonal to e_1..e_M.
class GridObliqueProjector {
 public:
  GridObliqueProjector(const ObliqueProjector& projector, const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }

  /// Sampled indicator of actuator j (1-based).
  std::span<const double> actuator(int j) const;

  ProjectionResult apply(std::span<const double> h) const;

 private:
  Grid grid_;
  MassMatrix mass_;
  int count_;
  Eigen::MatrixXd modes_;      // nodes x M sampled e_i
  Eigen::MatrixXd actuators_;  // nodes x M sampled indicators
  Eigen::MatrixXd gram_;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_;
};

ProjectionResult apply_projection(const GridObliqueProjector& projector, std::span<const double> h);

}  // namespace ksstab
