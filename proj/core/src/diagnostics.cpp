#include "ksstab/diagnostics.hpp"

#include <cmath>
#include <stdexcept>

namespace ksstab {

namespace {

void check_size(const SpectralBasis& basis, Eigen::Index n) {
  if (n != basis.modes()) throw std::invalid_argument("coefficient vector does not match basis size");
}

}  // namespace

double l2_norm(const SpectralBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  check_size(basis, coeffs.size());
  double sum = 0.0;
  for (int n = 1; n <= basis.modes(); ++n) sum += coeffs(n - 1) * coeffs(n - 1) * basis.squared_norm(n);
  return std::sqrt(sum);
}

double l2_distance(const SpectralBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b) {
  return l2_norm(basis, a - b);
}

double v_norm(const Eigen::Ref<const Eigen::VectorXd>& coeffs, const SpectralBasis& basis,
              const ModelParams& params) {
  check_size(basis, coeffs.size());
  double sum = 0.0;
  for (int n = 1; n <= basis.modes(); ++n) {
    const double mu = basis.laplacian_eigenvalue(n);
    sum += (mu * mu + 2.0 * mu + 1.0) * coeffs(n - 1) * coeffs(n - 1) * basis.squared_norm(n);
  }
  return std::sqrt(params.nu2 * sum);
}

double spatial_mean(const SpectralBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  check_size(basis, coeffs.size());
  if (basis.bc() != BoundaryKind::Periodic) throw std::invalid_argument("spatial_mean expects a periodic basis");
  return coeffs(0);
}

DecayFit fit_decay(std::span<const double> times, std::span<const double> distances, double floor) {
  if (times.size() != distances.size()) throw std::invalid_argument("times and distances differ in length");
  std::size_t n = 0;
  while (n < distances.size() && distances[n] > floor) ++n;
  if (n < 2) throw std::invalid_argument("decay fit needs at least two samples above the floor");

  double mean_t = 0.0;
  double mean_y = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    mean_t += times[k];
    mean_y += std::log(distances[k]);
  }
  mean_t /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dt = times[k] - mean_t;
    sxx += dt * dt;
    sxy += dt * (std::log(distances[k]) - mean_y);
  }
  if (sxx <= 0.0) throw std::invalid_argument("decay fit needs distinct sample times");
  const double slope = sxy / sxx;
  return {-slope, std::exp(mean_y - slope * mean_t), static_cast<int>(n)};
}

std::vector<SampleDiagnostics> diagnose(const Trajectory& trajectory, const SpectralBasis& basis,
                                        const ModelParams& params) {
  std::vector<SampleDiagnostics> out;
  out.reserve(trajectory.samples.size());
  for (const auto& s : trajectory.samples) {
    const Eigen::VectorXd diff = s.tracked - s.target;
    out.push_back({s.time, spatial_mean(basis, s.tracked), spatial_mean(basis, s.target), l2_norm(basis, diff),
                   v_norm(diff, basis, params), s.controls.size() > 0 ? s.controls.cwiseAbs().maxCoeff() : 0.0});
  }
  return out;
}

DecayFit fit_decay(const std::vector<SampleDiagnostics>& diagnostics) {
  std::vector<double> t;
  std::vector<double> d;
  t.reserve(diagnostics.size());
  d.reserve(diagnostics.size());
  for (const auto& s : diagnostics) {
    t.push_back(s.time);
    d.push_back(s.l2_distance);
  }
  return fit_decay(t, d);
}

}  // namespace ksstab
