#pragma once

#include <functional>
#include <span>
#include <vector>

#include "ksstab/basis.hpp"

namespace ksstab {

/// Uniform periodic mesh {n * step : 0 <= n < L / step}; the node at L is
/// identified with 0.
class Grid {
 public:
  /// Throws std::invalid_argument unless length / step is a positive integer
  /// (at least 3, so that the periodic stencil is well formed).
  explicit Grid(double step, double length = 1.0);

  int size() const noexcept { return size_; }
  double step() const noexcept { return step_; }
  double length() const noexcept { return length_; }
  double node(int n) const noexcept { return static_cast<double>(n) * step_; }
  std::vector<double> nodes() const;

  std::vector<double> sample(const std::function<double(double)>& f) const;

 private:
  double length_;
  int size_;
  double step_;
};

Grid build_grid(double step, double length = 1.0);

/// Periodic P1 (hat function) mass matrix: circulant tridiagonal with
/// stencil (h/6) [1, 4, 1].
class MassMatrix {
 public:
  explicit MassMatrix(const Grid& grid);

  int size() const noexcept { return size_; }
  double diagonal() const noexcept { return diagonal_; }
  double off_diagonal() const noexcept { return off_diagonal_; }

  void apply(std::span<const double> in, std::span<double> out) const;
  std::vector<double> apply(std::span<const double> in) const;

  /// Solves M x = rhs with the cyclic Thomas algorithm (Sherman-Morrison).
  std::vector<double> solve(std::span<const double> rhs) const;

  double inner_product(std::span<const double> f, std::span<const double> g) const;

 private:
  void check_length(std::size_t n) const;

  int size_;
  double diagonal_;
  double off_diagonal_;
};

/// f^T M g; approximates the L2 product of the interpolants to O(h^2).
double inner_product(const Grid& grid, std::span<const double> f, std::span<const double> g);

/// Coefficients c_n = (f, e_n)_M / (e_n, e_n)_M for n = 1..count against the
/// unnormalized eigenfunctions. Each mode is sampled on the fly; use
/// GalerkinSpace for repeated projections on the same grid.
std::vector<double> project_onto_modes(const Grid& grid, const SpectralBasis& basis,
                                       std::span<const double> f, int count);

}  // namespace ksstab
