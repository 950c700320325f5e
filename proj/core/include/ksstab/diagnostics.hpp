#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ksstab/basis.hpp"
#include "ksstab/model.hpp"
#include "ksstab/simulation.hpp"

namespace ksstab {

/// L2 norm of sum_n z_n e_n using the exact squared norms of the eigenfunctions.
double l2_norm(const SpectralBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& coeffs);
double l2_distance(const SpectralBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b);

/// ||z||_V^2 = nu2 (||z_xx||^2 + 2 ||z_x||^2 + ||z||^2) = nu2 sum_n (mu_n + 1)^2 z_n^2 (e_n, e_n).
double v_norm(const Eigen::Ref<const Eigen::VectorXd>& coeffs, const SpectralBasis& basis,
              const ModelParams& params);

/// Spatial mean (1/L) int z dx, i.e. the constant-mode coefficient for periodic bases.
double spatial_mean(const SpectralBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& coeffs);

struct DecayFit {
  double rate;       ///< mu in C e^{-mu t}
  double amplitude;  ///< C
  int samples;
};

/// Least-squares fit of log(distance) = log C - mu t over the leading run of
/// samples whose distance exceeds `floor`. Throws std::invalid_argument with
/// fewer than two usable samples.
DecayFit fit_decay(std::span<const double> times, std::span<const double> distances, double floor = 1e-10);

struct SampleDiagnostics {
  double time;
  double mean;         ///< mean of the tracked state
  double target_mean;  ///< mean of the target state
  double l2_distance;
  double v_distance;
  double max_control;  ///< max_j |u_j|, 0 for uncontrolled runs
};

std::vector<SampleDiagnostics> diagnose(const Trajectory& trajectory, const SpectralBasis& basis,
                                        const ModelParams& params);

/// fit_decay on the L2 distances of a trajectory.
DecayFit fit_decay(const std::vector<SampleDiagnostics>& diagnostics);

}  // namespace ksstab
