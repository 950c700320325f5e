#include "ksstab/femgrid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ksstab {

Grid::Grid(double step, double length) : length_(length) {
  if (!(step > 0.0) || !(length > 0.0) || !std::isfinite(step) || !std::isfinite(length)) {
    throw std::invalid_argument("grid step and length must be positive");
  }
  const double ratio = length / step;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * rounded || rounded < 1.0) {
    throw std::invalid_argument("L / x_step = " + std::to_string(ratio) + " is not a positive integer");
  }
  if (rounded < 3.0) {
    throw std::invalid_argument("periodic grid needs at least 3 nodes");
  }
  size_ = static_cast<int>(rounded);
  step_ = length / rounded;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> x(static_cast<std::size_t>(size_));
  for (int n = 0; n < size_; ++n) x[static_cast<std::size_t>(n)] = node(n);
  return x;
}

std::vector<double> Grid::sample(const std::function<double(double)>& f) const {
  std::vector<double> values(static_cast<std::size_t>(size_));
  for (int n = 0; n < size_; ++n) values[static_cast<std::size_t>(n)] = f(node(n));
  return values;
}

Grid build_grid(double step, double length) { return Grid(step, length); }

MassMatrix::MassMatrix(const Grid& grid)
    : size_(grid.size()), diagonal_(4.0 * grid.step() / 6.0), off_diagonal_(grid.step() / 6.0) {}

void MassMatrix::check_length(std::size_t n) const {
  if (n != static_cast<std::size_t>(size_)) {
    throw std::invalid_argument("grid function has " + std::to_string(n) + " values, expected " +
                                std::to_string(size_));
  }
}

void MassMatrix::apply(std::span<const double> in, std::span<double> out) const {
  check_length(in.size());
  check_length(out.size());
  const std::size_t n = in.size();
  out[0] = diagonal_ * in[0] + off_diagonal_ * (in[n - 1] + in[1]);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    out[k] = diagonal_ * in[k] + off_diagonal_ * (in[k - 1] + in[k + 1]);
  }
  out[n - 1] = diagonal_ * in[n - 1] + off_diagonal_ * (in[n - 2] + in[0]);
}

std::vector<double> MassMatrix::apply(std::span<const double> in) const {
  std::vector<double> out(in.size());
  apply(in, out);
  return out;
}

std::vector<double> MassMatrix::solve(std::span<const double> rhs) const {
  check_length(rhs.size());
  const std::size_t n = rhs.size();
  const double a = off_diagonal_;
  const double b = diagonal_;

  // Write M = T + u v^T with u = (gamma, 0, ..., 0, a), v = (1, 0, ..., 0, a / gamma),
  // T tridiagonal; solve T y = rhs and T z = u and combine.
  const double gamma = -b;
  std::vector<double> diag(n, b);
  diag[0] = b - gamma;
  diag[n - 1] = b - a * a / gamma;

  auto thomas = [&](std::vector<double> d) {
    std::vector<double> c(n);
    std::vector<double> m = diag;
    c[0] = a / m[0];
    d[0] /= m[0];
    for (std::size_t k = 1; k < n; ++k) {
      const double denom = m[k] - a * c[k - 1];
      c[k] = a / denom;
      d[k] = (d[k] - a * d[k - 1]) / denom;
    }
    for (std::size_t k = n - 1; k-- > 0;) d[k] -= c[k] * d[k + 1];
    return d;
  };

  std::vector<double> y = thomas(std::vector<double>(rhs.begin(), rhs.end()));
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = a;
  std::vector<double> z = thomas(u);

  const double vy = y[0] + a / gamma * y[n - 1];
  const double vz = z[0] + a / gamma * z[n - 1];
  const double factor = vy / (1.0 + vz);
  for (std::size_t k = 0; k < n; ++k) y[k] -= factor * z[k];
  return y;
}

double MassMatrix::inner_product(std::span<const double> f, std::span<const double> g) const {
  check_length(f.size());
  check_length(g.size());
  const std::size_t n = f.size();
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t prev = k == 0 ? n - 1 : k - 1;
    const std::size_t next = k + 1 == n ? 0 : k + 1;
    sum += f[k] * (diagonal_ * g[k] + off_diagonal_ * (g[prev] + g[next]));
  }
  return sum;
}

double inner_product(const Grid& grid, std::span<const double> f, std::span<const double> g) {
  return MassMatrix(grid).inner_product(f, g);
}

std::vector<double> project_onto_modes(const Grid& grid, const SpectralBasis& basis,
                                       std::span<const double> f, int count) {
  if (count < 1 || count > basis.modes()) {
    throw std::out_of_range("projection onto " + std::to_string(count) + " modes of a " +
                            std::to_string(basis.modes()) + "-mode basis");
  }
  if (std::abs(grid.length() - basis.length()) > 1e-12 * basis.length()) {
    throw std::invalid_argument("grid and basis lengths differ");
  }
  const MassMatrix mass(grid);
  const std::vector<double> mf = mass.apply(f);
  std::vector<double> coeffs(static_cast<std::size_t>(count));
  std::vector<double> mode(f.size());
  for (int i = 1; i <= count; ++i) {
    for (int n = 0; n < grid.size(); ++n) {
      mode[static_cast<std::size_t>(n)] = basis.eigenfunction(i, grid.node(n));
    }
    double num = 0.0;
    for (std::size_t k = 0; k < mode.size(); ++k) num += mode[k] * mf[k];
    coeffs[static_cast<std::size_t>(i - 1)] = num / mass.inner_product(mode, mode);
  }
  return coeffs;
}

}  // namespace ksstab
