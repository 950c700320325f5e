#pragma once

#include <memory>

#include <Eigen/Dense>

#include "ksstab/galerkin.hpp"
#include "ksstab/model.hpp"
#include "ksstab/oblique.hpp"

namespace ksstab {

struct FeedbackConfig {
  double gain = 10.0;  ///< lambda
  std::shared_ptr<const ObliqueProjector> projector;
  bool enabled = true;  ///< C_feed
};

/// Periodic actuator setup on [0, L) with the first M eigenfunctions as auxiliary space.
FeedbackConfig make_feedback_config(double gain, int actuators, double fraction, double length = 1.0,
                                    bool enabled = true);

struct FeedbackOutput {
  Eigen::VectorXd amplitudes;    ///< u_j, j = 1..M
  Eigen::VectorXd coefficients;  ///< Galerkin coordinates of sum_j u_j 1_{omega_j}
};

/// Oblique-projection feedback
///   sum_j u_j 1_{omega_j} = P (nu1 y_xx + nu0 (N(ytilde) - N(yhat)) - lambda y),  y = ytilde - yhat.
///
/// The moments (e_i, .) of the argument are formed in spectral coordinates:
/// the linear part is diagonal there, and the nonlinear difference comes from
/// the already projected nonlinearities of both states. The Galerkin
/// coordinates of the control use exact actuator/eigenfunction integrals.
class FeedbackLaw {
 public:
  FeedbackLaw(const ModelParams& params, const SpectralBasis& galerkin_basis, FeedbackConfig config);

  bool enabled() const noexcept { return config_.enabled; }
  int actuators() const noexcept { return config_.projector->size(); }
  const FeedbackConfig& config() const noexcept { return config_; }

  /// Moments (e_i, argument), i = 1..M.
  Eigen::VectorXd argument_moments(const Eigen::Ref<const Eigen::VectorXd>& tracked,
                                   const Eigen::Ref<const Eigen::VectorXd>& target,
                                   const Eigen::Ref<const Eigen::VectorXd>& nonlinear_tracked,
                                   const Eigen::Ref<const Eigen::VectorXd>& nonlinear_target) const;

  /// nonlinear_* are nu0 P_N N(.) of the two states, as produced by nonlinearity().
  FeedbackOutput evaluate(const Eigen::Ref<const Eigen::VectorXd>& tracked,
                          const Eigen::Ref<const Eigen::VectorXd>& target,
                          const Eigen::Ref<const Eigen::VectorXd>& nonlinear_tracked,
                          const Eigen::Ref<const Eigen::VectorXd>& nonlinear_target) const;

  /// Galerkin coordinates of sum_j u_j 1_{omega_j}.
  Eigen::VectorXd control_coefficients(const Eigen::Ref<const Eigen::VectorXd>& amplitudes) const;

 private:
  ModelParams params_;
  SpectralBasis basis_;
  FeedbackConfig config_;
  Eigen::VectorXd moment_weights_;  // (e_i, e_i), i <= M
  Eigen::VectorXd eigenvalues_;     // mu_i, i <= M
  Eigen::MatrixXd control_modes_;   // N x M, (e_n, 1_{omega_j}) / (e_n, e_n)
};

/// Computes the control for (tracked, target) from scratch, including both nonlinearities.
FeedbackOutput feedback_control(const FeedbackLaw& law, const ModelParams& params, const GalerkinSpace& space,
                                const Eigen::Ref<const Eigen::VectorXd>& tracked,
                                const Eigen::Ref<const Eigen::VectorXd>& target);

}  // namespace ksstab
