#include "ksstab/simulation.hpp"

#include <cmath>
#include <string>

namespace ksstab {

BlowUpError::BlowUpError(long step, double time)
    : std::runtime_error("solution blew up at step " + std::to_string(step) + " (t = " + std::to_string(time) +
                         ")"),
      step_(step),
      time_(time) {}

ImexIntegrator::ImexIntegrator(const ModelParams& params, const GalerkinSpace& space, double dt,
                               const FeedbackLaw* feedback, ForcingFunction forcing)
    : params_(params), space_(space), dt_(dt), feedback_(feedback), forcing_(std::move(forcing)) {
  params_.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const int n = space.modes();
  implicit_scale_.resize(n);
  explicit_scale_.resize(n);
  for (int i = 1; i <= n; ++i) {
    const double mu = space.basis().laplacian_eigenvalue(i);
    const double symbol = params_.nu2 * mu * mu - params_.nu1 * mu;
    implicit_scale_(i - 1) = 1.0 / (1.0 + 0.5 * dt * symbol);
    explicit_scale_(i - 1) = 1.0 - 0.5 * dt * symbol;
  }
  nodes_ = space.grid().nodes();
}

Eigen::VectorXd ImexIntegrator::linear_amplification() const {
  return explicit_scale_.cwiseProduct(implicit_scale_);
}

void ImexIntegrator::reset(double start_time, const Eigen::Ref<const Eigen::MatrixXd>& states,
                           std::vector<int> controlled_columns) {
  if (states.rows() != space_.modes() || states.cols() < 1) {
    throw std::invalid_argument("states must be N x k with k >= 1");
  }
  for (int c : controlled_columns) {
    if (c <= 0 || c >= states.cols()) throw std::invalid_argument("controlled column must be in [1, k)");
  }
  if (!controlled_columns.empty() && feedback_ == nullptr) {
    throw std::invalid_argument("controlled columns need a feedback law");
  }
  start_time_ = start_time;
  steps_ = 0;
  controlled_ = std::move(controlled_columns);
  states_ = states;
  prepared_ = false;
  has_history_ = false;
  if (forcing_) forcing_now_ = projected_forcing(start_time);
}

Eigen::VectorXd ImexIntegrator::projected_forcing(double t) const {
  std::vector<double> values(nodes_.size());
  for (std::size_t k = 0; k < nodes_.size(); ++k) values[k] = forcing_(t, nodes_[k]);
  return space_.project(values);
}

void ImexIntegrator::prepare() {
  if (prepared_) return;
  const Eigen::MatrixXd nonlinear = nonlinearity_columns(params_, space_, states_);
  explicit_now_ = -nonlinear;
  const bool feedback_on = feedback_ != nullptr && feedback_->enabled();
  controls_.resize(feedback_ != nullptr ? feedback_->actuators() : 0, static_cast<Eigen::Index>(controlled_.size()));
  for (std::size_t c = 0; c < controlled_.size(); ++c) {
    const int col = controlled_[c];
    if (!feedback_on) {
      controls_.col(static_cast<Eigen::Index>(c)).setZero();
      continue;
    }
    const FeedbackOutput out = feedback_->evaluate(states_.col(col), states_.col(0), nonlinear.col(col), nonlinear.col(0));
    explicit_now_.col(col) += out.coefficients;
    controls_.col(static_cast<Eigen::Index>(c)) = out.amplitudes;
  }
  if (!has_history_) {
    explicit_prev_ = explicit_now_;
    has_history_ = true;
  }
  prepared_ = true;
}

void ImexIntegrator::advance() {
  prepare();
  Eigen::MatrixXd rhs = explicit_scale_.asDiagonal() * states_;
  rhs += dt_ * (1.5 * explicit_now_ - 0.5 * explicit_prev_);
  Eigen::VectorXd forcing_next;
  if (forcing_) {
    forcing_next = projected_forcing(start_time_ + static_cast<double>(steps_ + 1) * dt_);
    rhs.colwise() += (0.5 * dt_) * (forcing_next + forcing_now_);
  }
  states_ = implicit_scale_.asDiagonal() * rhs;
  ++steps_;
  if (!states_.allFinite() || states_.cwiseAbs().maxCoeff() > kBlowUpThreshold) {
    throw BlowUpError(steps_, time());
  }
  explicit_prev_.swap(explicit_now_);
  if (forcing_) forcing_now_ = std::move(forcing_next);
  prepared_ = false;
}

long step_count(double final_time, double dt) {
  if (!(final_time > 0.0) || !(dt > 0.0)) throw std::invalid_argument("final time and dt must be positive");
  const double ratio = final_time / dt;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw std::invalid_argument("final time " + std::to_string(final_time) + " is not a multiple of dt " +
                                std::to_string(dt));
  }
  return static_cast<long>(rounded);
}

Trajectory run(const ModelParams& params, const GalerkinSpace& space, const FeedbackLaw* feedback,
               const Eigen::Ref<const Eigen::VectorXd>& target0, const Eigen::Ref<const Eigen::VectorXd>& tracked0,
               const RunOptions& options) {
  if (options.sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
  const long steps = step_count(options.final_time, options.dt);
  const bool controlled = feedback != nullptr && feedback->enabled();

  ImexIntegrator integrator(params, space, options.dt, controlled ? feedback : nullptr);
  Eigen::MatrixXd initial(space.modes(), 2);
  initial.col(0) = target0;
  initial.col(1) = tracked0;
  integrator.reset(0.0, initial, controlled ? std::vector<int>{1} : std::vector<int>{});

  Trajectory trajectory;
  trajectory.controlled = controlled;
  trajectory.samples.reserve(static_cast<std::size_t>(steps / options.sample_every + 2));
  for (long k = 0;; ++k) {
    if (k % options.sample_every == 0 || k == steps) {
      integrator.prepare();
      TrajectorySample sample{integrator.time(), integrator.states().col(0), integrator.states().col(1), {}};
      if (controlled) sample.controls = integrator.controls().col(0);
      trajectory.samples.push_back(std::move(sample));
    }
    if (k == steps) break;
    integrator.advance();
  }
  trajectory.steps = steps;
  return trajectory;
}

PairedTrajectory run_paired(const ModelParams& params, const GalerkinSpace& space, const FeedbackLaw& feedback,
                            const Eigen::Ref<const Eigen::VectorXd>& target0,
                            const Eigen::Ref<const Eigen::VectorXd>& tracked0, const RunOptions& options) {
  if (options.sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
  if (!feedback.enabled()) throw std::invalid_argument("paired run needs an enabled feedback law");
  const long steps = step_count(options.final_time, options.dt);

  ImexIntegrator integrator(params, space, options.dt, &feedback);
  Eigen::MatrixXd initial(space.modes(), 3);
  initial.col(0) = target0;
  initial.col(1) = tracked0;
  initial.col(2) = tracked0;
  integrator.reset(0.0, initial, {2});

  PairedTrajectory out;
  out.controlled.controlled = true;
  for (long k = 0;; ++k) {
    if (k % options.sample_every == 0 || k == steps) {
      integrator.prepare();
      const auto& z = integrator.states();
      out.free.samples.push_back({integrator.time(), z.col(0), z.col(1), {}});
      out.controlled.samples.push_back({integrator.time(), z.col(0), z.col(2), integrator.controls().col(0)});
    }
    if (k == steps) break;
    integrator.advance();
  }
  out.free.steps = steps;
  out.controlled.steps = steps;
  return out;
}

}  // namespace ksstab
