#pragma once

#include <string_view>

#include "ksstab/model.hpp"

namespace ksstab {

enum class BoundaryKind { Periodic, Dirichlet, Neumann };

std::string_view to_string(BoundaryKind kind);

/// Laplacian eigenfunctions on [0, L) for one boundary condition kind.
///
/// Modes are 1-based. Periodic ordering is 1 = constant, then sin/cos pairs
/// sharing a frequency: even i -> sin(i pi x / L), odd i >= 3 -> cos((i-1) pi x / L).
/// Dirichlet i -> sin(i pi x / L), Neumann i -> cos((i-1) pi x / L).
/// Values are unnormalized unless the name says otherwise.
class SpectralBasis {
 public:
  SpectralBasis(BoundaryKind bc, double length, int modes);

  BoundaryKind bc() const noexcept { return bc_; }
  double length() const noexcept { return length_; }
  int modes() const noexcept { return modes_; }

  /// Angular frequency k_i, so the mode is sin(k_i x), cos(k_i x) or 1.
  double frequency(int i) const;

  /// True when mode i is a sine, false for cosine and the constant.
  bool is_sine(int i) const;

  double eigenfunction(int i, double x) const;

  /// d^order/dx^order of the eigenfunction, in closed form.
  double derivative(int i, double x, int order) const;

  /// Unit L2 norm version: (1/L)^{1/2} for constants, (2/L)^{1/2} otherwise.
  double normalized_eigenfunction(int i, double x) const;
  double normalization(int i) const;

  /// Exact integral of e_i^2 over the domain.
  double squared_norm(int i) const;

  /// Eigenvalue mu_i of -Laplacian, evaluated from the closed form.
  double laplacian_eigenvalue(int i) const;

  /// Same family with a different mode count.
  SpectralBasis truncated(int modes) const { return SpectralBasis(bc_, length_, modes); }

 private:
  void check_index(int i) const;
  void check_point(double x) const;
  double frequency_unchecked(int i) const noexcept;

  BoundaryKind bc_;
  double length_;
  int modes_;
};

/// Linear growth rate sigma_i = -nu2 mu_i^2 + nu1 mu_i of mode i.
double ks_growth_rate(const ModelParams& params, const SpectralBasis& basis, int i);

/// Number of modes with sigma_i >= 0. Throws std::domain_error if the last
/// mode is still nonnegative, since then the count may be truncated.
int count_unstable_modes(const ModelParams& params, const SpectralBasis& basis);

}  // namespace ksstab
