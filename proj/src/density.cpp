#include "uflow/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uflow {

std::shared_ptr<const Grid> Grid::make(double R, int n) {
  if (!(R > 0.0)) throw ConfigError("grid.R must be positive");
  if (n < 3) throw ConfigError("grid.n must be at least 3");
  if (n % 2 == 0) throw ConfigError("grid.n must be odd");
  auto g = std::make_shared<Grid>();
  g->R = R;
  g->n = n;
  g->dx = 2.0 * R / (n - 1);
  g->nodes.resize(n);
  for (int i = 0; i < n; ++i) g->nodes[i] = -R + i * g->dx;
  g->nodes[(n - 1) / 2] = 0.0;  // keep the center exact
  return g;
}

double quadrature(const Grid& grid, std::span<const double> g) {
  if (static_cast<int>(g.size()) != grid.n)
    throw DomainError("quadrature: sample count does not match the grid");
  double s = 0.0;
  for (int i = 0; i < grid.n; ++i) {
    if (!std::isfinite(g[i])) throw DomainError("quadrature: non-finite sample");
    s += grid.weight(i) * g[i];
  }
  return s;
}

GridDensity::GridDensity(GridPtr grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  const int n = grid_->n;
  if (static_cast<int>(values_.size()) != n)
    throw DomainError("GridDensity: value count does not match the grid");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("GridDensity: non-finite value");
    if (v < 0.0) throw DomainError("GridDensity: negative value");
  }
  raw_mass_ = quadrature(*grid_, values_);
  if (raw_mass_ <= 0.0) throw DomainError("GridDensity: zero total mass");
  if (std::abs(raw_mass_ - 1.0) > 1e-8) {
    for (double& v : values_) v /= raw_mass_;
    renormalized_ = true;
  }
  cdf_.resize(n);
  cdf_[0] = 0.0;
  const double dx = grid_->dx;
  for (int i = 1; i < n; ++i)
    cdf_[i] = cdf_[i - 1] + 0.5 * dx * (values_[i - 1] + values_[i]);
  mass_ = cdf_[n - 1];
}

double GridDensity::cdf_at(double x) const {
  const auto& xs = grid_->nodes;
  if (x <= xs.front()) return 0.0;
  if (x >= xs.back()) return mass_;
  const double dx = grid_->dx;
  int i = std::min(static_cast<int>((x + grid_->R) / dx), grid_->n - 2);
  double s = (x - xs[i]) / dx;
  // quadratic segment matching the trapezoid accumulation
  double a = values_[i], b = values_[i + 1];
  return cdf_[i] + dx * (a * s + 0.5 * (b - a) * s * s);
}

double GridDensity::quantile(double t) const {
  if (t <= 0.0) return -grid_->R;
  if (t >= mass_) return grid_->R;
  auto it = std::lower_bound(cdf_.begin(), cdf_.end(), t);
  int j = static_cast<int>(it - cdf_.begin());
  if (j == 0) return grid_->nodes[0];
  if (cdf_[j] == t) {
    // leftmost point of any flat stretch at level t
    int k = j;
    while (k > 0 && cdf_[k - 1] == t) --k;
    return grid_->nodes[k];
  }
  double lo = cdf_[j - 1], hi = cdf_[j];
  double s = (t - lo) / (hi - lo);
  return grid_->nodes[j - 1] + s * grid_->dx;
}

double GridDensity::value_at(double x) const {
  const auto& xs = grid_->nodes;
  if (x < xs.front() || x > xs.back()) return 0.0;
  const double dx = grid_->dx;
  int i = std::min(static_cast<int>((x + grid_->R) / dx), grid_->n - 2);
  double s = (x - xs[i]) / dx;
  return values_[i] * (1.0 - s) + values_[i + 1] * s;
}

ConeBounds cone_measure(const GridDensity& f, const GridDensity& m) {
  if (f.grid_ptr().get() != m.grid_ptr().get() && f.grid().n != m.grid().n)
    throw DomainError("cone_measure: densities live on different grids");
  ConeBounds b;
  b.c = std::numeric_limits<double>::infinity();
  b.C = 0.0;
  for (int i = 0; i < f.size(); ++i) {
    if (m[i] <= 0.0) {
      ++b.excluded_cells;
      continue;
    }
    double u = f[i] / m[i];
    b.c = std::min(b.c, u);
    b.C = std::max(b.C, u);
  }
  if (!std::isfinite(b.c)) throw DomainError("cone_measure: reference vanishes everywhere");
  return b;
}

}  // namespace uflow
