#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace ksstab::oracle {

/// Composite 5-point Gauss-Legendre rule on [a, b] with `panels` panels.
inline double gauss_legendre(const std::function<double(double)>& f, double a, double b, int panels = 64) {
  static constexpr std::array<double, 5> nodes{0.0, -0.5384693101056831, 0.5384693101056831, -0.9061798459386640,
                                               0.9061798459386640};
  static constexpr std::array<double, 5> weights{0.5688888888888889, 0.4786286704993665, 0.4786286704993665,
                                                 0.2369268850561891, 0.2369268850561891};
  const double width = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * width;
    for (std::size_t q = 0; q < nodes.size(); ++q) sum += weights[q] * f(mid + 0.5 * width * nodes[q]);
  }
  return 0.5 * width * sum;
}

/// Dense periodic P1 mass matrix assembled element by element.
inline Eigen::MatrixXd dense_mass_matrix(int nodes, double step) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(nodes, nodes);
  const Eigen::Matrix2d element = (step / 6.0) * (Eigen::Matrix2d() << 2.0, 1.0, 1.0, 2.0).finished();
  for (int e = 0; e < nodes; ++e) {
    const int a = e;
    const int b = (e + 1) % nodes;
    m(a, a) += element(0, 0);
    m(a, b) += element(0, 1);
    m(b, a) += element(1, 0);
    m(b, b) += element(1, 1);
  }
  return m;
}

/// Periodic centered differences of sampled values.
inline std::vector<double> centered_difference(const std::vector<double>& v, double step) {
  const std::size_t n = v.size();
  std::vector<double> d(n);
  for (std::size_t k = 0; k < n; ++k) d[k] = (v[(k + 1) % n] - v[(k + n - 1) % n]) / (2.0 * step);
  return d;
}

inline std::vector<double> second_difference(const std::vector<double>& v, double step) {
  const std::size_t n = v.size();
  std::vector<double> d(n);
  for (std::size_t k = 0; k < n; ++k) d[k] = (v[(k + 1) % n] - 2.0 * v[k] + v[(k + n - 1) % n]) / (step * step);
  return d;
}

inline std::vector<double> random_values(std::size_t n, unsigned seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, unsigned seed, double scale = 1.0) {
  const auto v = random_values(static_cast<std::size_t>(n), seed, scale);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), n);
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace ksstab::oracle
