#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <gtest/gtest.h>

#include "ksstab/basis.hpp"
#include "ksstab/femgrid.hpp"
#include "oracles.hpp"

namespace ksstab {
namespace {

constexpr double kPi = std::numbers::pi;

ModelParams reference_params() { return ModelParams{ModelKind::Fluid, 1e-6, 1e-2, 1.0, ForcingKind::Zero}; }

TEST(SpectralBasis, PeriodicOrderingAlternatesSineAndCosine) {
  const SpectralBasis basis(BoundaryKind::Periodic, 1.0, 8);
  EXPECT_DOUBLE_EQ(basis.eigenfunction(1, 0.3), 1.0);
  EXPECT_NEAR(basis.eigenfunction(2, 0.25), 1.0, 1e-15);
  EXPECT_NEAR(basis.eigenfunction(3, 0.1), std::cos(2.0 * kPi * 0.1), 1e-15);
  EXPECT_NEAR(basis.eigenfunction(4, 0.1), std::sin(4.0 * kPi * 0.1), 1e-15);
  EXPECT_NEAR(basis.eigenfunction(7, 0.37), std::cos(6.0 * kPi * 0.37), 1e-15);
  EXPECT_TRUE(basis.is_sine(2));
  EXPECT_FALSE(basis.is_sine(3));
  EXPECT_FALSE(basis.is_sine(1));
}

TEST(SpectralBasis, DirichletAndNeumannFamilies) {
  const SpectralBasis dirichlet(BoundaryKind::Dirichlet, 1.0, 5);
  EXPECT_NEAR(dirichlet.eigenfunction(3, 0.5), -1.0, 1e-15);
  const SpectralBasis neumann(BoundaryKind::Neumann, 2.0, 5);
  EXPECT_DOUBLE_EQ(neumann.eigenfunction(1, 1.7), 1.0);
  EXPECT_NEAR(neumann.eigenfunction(3, 0.4), std::cos(2.0 * kPi * 0.4 / 2.0), 1e-15);
}

TEST(SpectralBasis, RejectsBadIndexAndPoint) {
  const SpectralBasis basis(BoundaryKind::Periodic, 1.0, 4);
  EXPECT_THROW(basis.eigenfunction(0, 0.1), std::out_of_range);
  EXPECT_THROW(basis.eigenfunction(5, 0.1), std::out_of_range);
  EXPECT_THROW(basis.eigenfunction(2, 1.0), std::domain_error);
  EXPECT_THROW(basis.eigenfunction(2, -1e-12), std::domain_error);
  EXPECT_THROW(basis.laplacian_eigenvalue(5), std::out_of_range);
  EXPECT_THROW(SpectralBasis(BoundaryKind::Periodic, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(SpectralBasis(BoundaryKind::Periodic, -1.0, 3), std::invalid_argument);
}

TEST(SpectralBasis, NormalizedModesHaveUnitNorm) {
  const SpectralBasis unit(BoundaryKind::Periodic, 1.0, 4);
  EXPECT_DOUBLE_EQ(unit.normalized_eigenfunction(1, 0.77), 1.0);
  EXPECT_NEAR(unit.normalized_eigenfunction(2, 0.25), std::sqrt(2.0), 1e-14);
  const SpectralBasis wide(BoundaryKind::Periodic, 4.0, 4);
  EXPECT_DOUBLE_EQ(wide.normalized_eigenfunction(1, 3.2), 0.5);

  for (auto bc : {BoundaryKind::Periodic, BoundaryKind::Dirichlet, BoundaryKind::Neumann}) {
    for (double length : {1.0, 2.5}) {
      const SpectralBasis basis(bc, length, 9);
      for (int i = 1; i <= 9; ++i) {
        const double norm2 = oracle::gauss_legendre(
            [&](double x) {
              const double v = basis.normalized_eigenfunction(i, std::min(x, std::nextafter(length, 0.0)));
              return v * v;
            },
            0.0, length);
        EXPECT_NEAR(norm2, 1.0, 1e-12) << to_string(bc) << " i=" << i << " L=" << length;
        EXPECT_NEAR(basis.squared_norm(i) * basis.normalization(i) * basis.normalization(i), 1.0, 1e-14);
      }
    }
  }
}

TEST(SpectralBasis, LaplacianEigenvalues) {
  const SpectralBasis periodic(BoundaryKind::Periodic, 1.0, 40);
  EXPECT_EQ(periodic.laplacian_eigenvalue(1), 0.0);
  EXPECT_NEAR(periodic.laplacian_eigenvalue(30), 30.0 * 30.0 * kPi * kPi, 1e-9);
  EXPECT_NEAR(periodic.laplacian_eigenvalue(30), 8882.64, 1e-2);
  for (int j = 1; 2 * j + 1 <= 40; ++j) {
    EXPECT_EQ(periodic.laplacian_eigenvalue(2 * j), periodic.laplacian_eigenvalue(2 * j + 1));
    EXPECT_LE(periodic.laplacian_eigenvalue(2 * j - 1), periodic.laplacian_eigenvalue(2 * j));
  }

  // Second difference of sampled sin(2 pi x) on a fine grid converges to 4 pi^2.
  const SpectralBasis dirichlet(BoundaryKind::Dirichlet, 1.0, 3);
  const double h = 1e-4;
  const Grid grid(h);
  const auto values = grid.sample([&](double x) { return dirichlet.eigenfunction(2, x); });
  const auto lap = oracle::second_difference(values, h);
  const int probe = 1250;  // x = 0.125, away from zeros
  EXPECT_NEAR(-lap[probe] / values[probe], dirichlet.laplacian_eigenvalue(2), 1e-5);
  EXPECT_NEAR(dirichlet.laplacian_eigenvalue(2), 4.0 * kPi * kPi, 1e-12);
}

TEST(SpectralBasis, DerivativesMatchFiniteDifferences) {
  const SpectralBasis basis(BoundaryKind::Periodic, 1.0, 12);
  const double eps = 1e-5;
  for (int i = 1; i <= 12; ++i) {
    for (double x : {0.1, 0.43, 0.8}) {
      for (int order = 1; order <= 4; ++order) {
        const double fd = (basis.derivative(i, x + eps, order - 1) - basis.derivative(i, x - eps, order - 1)) /
                          (2.0 * eps);
        const double scale = std::pow(basis.frequency(i) + 1.0, order);
        EXPECT_NEAR(basis.derivative(i, x, order), fd, 1e-7 * scale) << "i=" << i << " order=" << order;
      }
    }
  }
}

TEST(GrowthRate, ReferenceSpectrumValues) {
  const auto params = reference_params();
  const SpectralBasis basis(BoundaryKind::Periodic, 1.0, 200);
  EXPECT_NEAR(ks_growth_rate(params, basis, 30), 9.9251, 1e-3);
  EXPECT_NEAR(ks_growth_rate(params, basis, 31), 9.9251, 1e-3);
  EXPECT_NEAR(ks_growth_rate(params, basis, 32), -1.0761, 1e-3);
  EXPECT_NEAR(ks_growth_rate(params, basis, 33), -1.0761, 1e-3);
  EXPECT_EQ(ks_growth_rate(params, basis, 1), 0.0);
  EXPECT_EQ(count_unstable_modes(params, basis), 31);
}

TEST(GrowthRate, DirichletCountMatchesDirectScan) {
  const auto params = reference_params();
  const SpectralBasis basis(BoundaryKind::Dirichlet, 1.0, 200);
  int scan = 0;
  for (int i = 1; i <= 200; ++i) {
    const double k = i * kPi;
    if (params.nu1 * k * k >= params.nu2 * k * k * k * k) ++scan;
  }
  EXPECT_EQ(scan, 31);
  EXPECT_EQ(count_unstable_modes(params, basis), scan);
}

TEST(GrowthRate, NonpositiveAntiDiffusionLeavesOnlyTheConstant) {
  const SpectralBasis basis(BoundaryKind::Periodic, 1.0, 20);
  for (double nu1 : {0.0, -1e-3}) {
    ModelParams params = reference_params();
    params.nu1 = nu1;
    EXPECT_EQ(count_unstable_modes(params, basis), 1);
  }
}

TEST(GrowthRate, RefusesTruncatedSpectrum) {
  const SpectralBasis basis(BoundaryKind::Periodic, 1.0, 20);
  EXPECT_THROW(count_unstable_modes(reference_params(), basis), std::domain_error);
}

TEST(GrowthRate, SignChangesAtNu1OverNu2) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> log_nu(-7.0, -1.0);
  for (int trial = 0; trial < 200; ++trial) {
    ModelParams params = reference_params();
    params.nu2 = std::pow(10.0, log_nu(rng));
    params.nu1 = std::pow(10.0, log_nu(rng));
    const SpectralBasis basis(BoundaryKind::Periodic, 1.0, 64);
    for (int i = 1; i <= 64; ++i) {
      const double mu = basis.laplacian_eigenvalue(i);
      const double ratio = params.nu1 / params.nu2;
      if (std::abs(mu - ratio) < 1e-9 * ratio) continue;
      EXPECT_EQ(ks_growth_rate(params, basis, i) >= 0.0, mu <= ratio);
    }
  }
}

// Off-diagonal mass products of sampled modes vanish (discrete Fourier
// orthogonality); the diagonal carries the P1 quadrature error
// (2 + cos kh)/3 - 1, bounded by (kh)^2 / 6.
TEST(SpectralBasis, DiscreteOrthogonality) {
  const SpectralBasis basis(BoundaryKind::Periodic, 1.0, 32);
  for (double h : {1e-2, 1e-3}) {
    const Grid grid(h);
    std::vector<std::vector<double>> sampled;
    for (int i = 1; i <= 32; ++i) {
      sampled.push_back(grid.sample([&](double x) { return basis.normalized_eigenfunction(i, x); }));
    }
    for (int i = 1; i <= 32; ++i) {
      const double kh = basis.frequency(i) * grid.step();
      const double diag = inner_product(grid, sampled[i - 1], sampled[i - 1]);
      EXPECT_LE(std::abs(diag - 1.0), kh * kh / 6.0 + 1e-13) << "i=" << i;
      EXPECT_NEAR(diag, i == 1 ? 1.0 : (2.0 + std::cos(kh)) / 3.0, 1e-12);
      for (int j = i + 1; j <= 32; ++j) {
        EXPECT_LE(std::abs(inner_product(grid, sampled[i - 1], sampled[j - 1])), 5.0 * h * h);
      }
    }
  }
}

// Relative error of the periodic second difference on sampled modes is
// 1 - (2 - 2 cos kh) / (kh)^2, bounded by mu h^2 / 12.
TEST(SpectralBasis, SecondDifferenceEigenvalueConsistency) {
  const SpectralBasis basis(BoundaryKind::Periodic, 1.0, 41);
  const double h = 1e-3;
  const Grid grid(h);
  for (int i = 2; i <= 41; ++i) {
    const double mu = basis.laplacian_eigenvalue(i);
    ASSERT_LE(mu, std::pow(40.0 * kPi, 2) * (1.0 + 1e-12));
    const auto values = grid.sample([&](double x) { return basis.eigenfunction(i, x); });
    const auto lap = oracle::second_difference(values, h);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t n = 0; n < values.size(); ++n) {
      num += -lap[n] * values[n];
      den += values[n] * values[n];
    }
    const double rel = std::abs(num / den - mu) / mu;
    EXPECT_LE(rel, mu * h * h / 12.0 * (1.0 + 1e-6)) << "i=" << i;
  }
}

}  // namespace
}  // namespace ksstab
