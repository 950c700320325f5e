#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ksstab/feedback.hpp"
#include "ksstab/galerkin.hpp"
#include "ksstab/model.hpp"

namespace ksstab {

/// Coefficient magnitude that counts as a blow-up.
inline constexpr double kBlowUpThreshold = 1e12;

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(long step, double time);
  long step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  long step_;
  double time_;
};

/// Pointwise right-hand side f(t, x).
using ForcingFunction = std::function<double(double, double)>;

/// Crank-Nicolson for the linear part, two-step Adams-Bashforth for the
/// nonlinear and feedback terms, per Galerkin mode:
///
///   (1 + dt/2 g_n) z^{k+1} = (1 - dt/2 g_n) z^k + dt/2 (f^{k+1} + f^k) + dt (3/2 Q^k - 1/2 Q^{k-1})
///
/// with g_n = nu2 mu_n^2 - nu1 mu_n and Q = -nu0 P N(z) + C_feed P K. The
/// first step uses Q^{-1} = Q^0.
///
/// Several states advance in lockstep as the columns of one matrix. Column 0
/// is the target; columns listed as controlled receive the feedback computed
/// against column 0 at the same instant.
class ImexIntegrator {
 public:
  ImexIntegrator(const ModelParams& params, const GalerkinSpace& space, double dt,
                 const FeedbackLaw* feedback = nullptr, ForcingFunction forcing = {});

  void reset(double start_time, const Eigen::Ref<const Eigen::MatrixXd>& states,
             std::vector<int> controlled_columns = {});

  /// Computes the explicit terms (and controls) at the current time. Idempotent.
  void prepare();

  /// Advances one step; calls prepare() if needed. Throws BlowUpError.
  void advance();

  void step() { advance(); }

  double time() const noexcept { return start_time_ + static_cast<double>(steps_) * dt_; }
  double dt() const noexcept { return dt_; }
  long steps() const noexcept { return steps_; }
  const Eigen::MatrixXd& states() const noexcept { return states_; }

  /// Controls u_j per controlled column (M x #controlled), valid after prepare().
  const Eigen::MatrixXd& controls() const noexcept { return controls_; }

  /// Amplification factors (1 - dt/2 g_n) / (1 + dt/2 g_n) of the linear part.
  Eigen::VectorXd linear_amplification() const;

 private:
  Eigen::VectorXd projected_forcing(double t) const;

  const ModelParams params_;
  const GalerkinSpace& space_;
  double dt_;
  const FeedbackLaw* feedback_;
  ForcingFunction forcing_;

  Eigen::VectorXd implicit_scale_;  // 1 / (1 + dt/2 g)
  Eigen::VectorXd explicit_scale_;  // 1 - dt/2 g
  std::vector<double> nodes_;

  double start_time_ = 0.0;
  long steps_ = 0;
  std::vector<int> controlled_;
  Eigen::MatrixXd states_;
  Eigen::MatrixXd explicit_now_;
  Eigen::MatrixXd explicit_prev_;
  Eigen::MatrixXd controls_;
  Eigen::VectorXd forcing_now_;
  bool prepared_ = false;
  bool has_history_ = false;
};

struct RunOptions {
  double final_time = 1.5;
  double dt = 1e-4;
  int sample_every = 10;
};

/// Number of steps final_time / dt; throws unless it is a positive integer.
long step_count(double final_time, double dt);

struct TrajectorySample {
  double time;
  Eigen::VectorXd target;
  Eigen::VectorXd tracked;
  Eigen::VectorXd controls;  ///< empty for uncontrolled runs
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  long steps = 0;
  bool controlled = false;
};

/// Integrates the target (free) and tracked state together up to
/// options.final_time, sampling every options.sample_every steps (and at the
/// final time). The tracked state is controlled when `feedback` is non-null
/// and enabled.
Trajectory run(const ModelParams& params, const GalerkinSpace& space, const FeedbackLaw* feedback,
               const Eigen::Ref<const Eigen::VectorXd>& target0, const Eigen::Ref<const Eigen::VectorXd>& tracked0,
               const RunOptions& options);

struct PairedTrajectory {
  Trajectory free;
  Trajectory controlled;
};

/// Free and controlled runs from the same data in one pass: the target, the
/// uncontrolled tracked state and the controlled tracked state advance as
/// three columns of one integrator, so the target is integrated once.
PairedTrajectory run_paired(const ModelParams& params, const GalerkinSpace& space, const FeedbackLaw& feedback,
                            const Eigen::Ref<const Eigen::VectorXd>& target0,
                            const Eigen::Ref<const Eigen::VectorXd>& tracked0, const RunOptions& options);

}  // namespace ksstab
