#include "ksstab/feedback.hpp"

#include <stdexcept>
#include <string>

namespace ksstab {

FeedbackConfig make_feedback_config(double gain, int actuators, double fraction, double length,
                                    bool enabled) {
  if (!(gain > 0.0)) throw std::invalid_argument("feedback gain lambda must be positive");
  const SpectralBasis basis(BoundaryKind::Periodic, length, actuators);
  auto projector = std::make_shared<const ObliqueProjector>(basis, build_actuators(actuators, fraction, length));
  return FeedbackConfig{gain, std::move(projector), enabled};
}

FeedbackLaw::FeedbackLaw(const ModelParams& params, const SpectralBasis& galerkin_basis, FeedbackConfig config)
    : params_(params), basis_(galerkin_basis), config_(std::move(config)) {
  if (!config_.projector) throw std::invalid_argument("feedback needs an oblique projector");
  const auto& projector = *config_.projector;
  const int m = projector.size();
  if (m > basis_.modes()) {
    throw std::invalid_argument("feedback with " + std::to_string(m) + " actuators needs at least " +
                                std::to_string(m) + " Galerkin modes");
  }
  if (std::abs(projector.basis().length() - basis_.length()) > 1e-12 * basis_.length() ||
      projector.basis().bc() != basis_.bc()) {
    throw std::invalid_argument("projector and Galerkin basis differ");
  }
  const auto cert = certify_direct_sum(projector);
  if (!cert.ok) {
    throw SingularGramError("feedback projector failed direct-sum certification", cert.condition);
  }
  moment_weights_.resize(m);
  eigenvalues_.resize(m);
  for (int i = 1; i <= m; ++i) {
    moment_weights_(i - 1) = basis_.squared_norm(i);
    eigenvalues_(i - 1) = basis_.laplacian_eigenvalue(i);
  }
  control_modes_ = gram_matrix(basis_, projector.actuators(), basis_.modes());
  for (int n = 1; n <= basis_.modes(); ++n) control_modes_.row(n - 1) /= basis_.squared_norm(n);
}

Eigen::VectorXd FeedbackLaw::argument_moments(const Eigen::Ref<const Eigen::VectorXd>& tracked,
                                              const Eigen::Ref<const Eigen::VectorXd>& target,
                                              const Eigen::Ref<const Eigen::VectorXd>& nonlinear_tracked,
                                              const Eigen::Ref<const Eigen::VectorXd>& nonlinear_target) const {
  const int m = actuators();
  const Eigen::ArrayXd y = (tracked.head(m) - target.head(m)).array();
  const Eigen::ArrayXd nonlinear = (nonlinear_tracked.head(m) - nonlinear_target.head(m)).array();
  // (e_i, nu1 y_xx - lambda y + nonlinear) with y_xx -> -mu_i y_i.
  const Eigen::ArrayXd coeff = (-params_.nu1 * eigenvalues_.array() - config_.gain) * y + nonlinear;
  return (coeff * moment_weights_.array()).matrix();
}

FeedbackOutput FeedbackLaw::evaluate(const Eigen::Ref<const Eigen::VectorXd>& tracked,
                                     const Eigen::Ref<const Eigen::VectorXd>& target,
                                     const Eigen::Ref<const Eigen::VectorXd>& nonlinear_tracked,
                                     const Eigen::Ref<const Eigen::VectorXd>& nonlinear_target) const {
  const auto n = static_cast<Eigen::Index>(basis_.modes());
  if (tracked.size() != n || target.size() != n || nonlinear_tracked.size() != n ||
      nonlinear_target.size() != n) {
    throw std::invalid_argument("feedback inputs must have one entry per Galerkin mode");
  }
  FeedbackOutput out;
  if (!config_.enabled) {
    out.amplitudes = Eigen::VectorXd::Zero(actuators());
    out.coefficients = Eigen::VectorXd::Zero(n);
    return out;
  }
  out.amplitudes = config_.projector->solve(argument_moments(tracked, target, nonlinear_tracked, nonlinear_target));
  out.coefficients = control_coefficients(out.amplitudes);
  return out;
}

Eigen::VectorXd FeedbackLaw::control_coefficients(const Eigen::Ref<const Eigen::VectorXd>& amplitudes) const {
  return control_modes_ * amplitudes;
}

FeedbackOutput feedback_control(const FeedbackLaw& law, const ModelParams& params, const GalerkinSpace& space,
                                const Eigen::Ref<const Eigen::VectorXd>& tracked,
                                const Eigen::Ref<const Eigen::VectorXd>& target) {
  Eigen::MatrixXd states(tracked.size(), 2);
  states.col(0) = tracked;
  states.col(1) = target;
  const Eigen::MatrixXd nonlinear = nonlinearity_columns(params, space, states);
  return law.evaluate(tracked, target, nonlinear.col(0), nonlinear.col(1));
}

}  // namespace ksstab
