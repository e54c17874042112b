#pragma once

#include <memory>
#include <span>
#include <vector>

#include "uflow/errors.hpp"

namespace uflow {

// Uniform symmetric grid on [-R, R] with an odd number of nodes, so that the
// origin is always a node.
struct Grid {
  double R = 0.0;
  int n = 0;
  double dx = 0.0;
  std::vector<double> nodes;

  static std::shared_ptr<const Grid> make(double R, int n);

  // Integration weight of node i (trapezoid: half cells at the two ends).
  double weight(int i) const { return (i == 0 || i == n - 1) ? 0.5 * dx : dx; }
};

using GridPtr = std::shared_ptr<const Grid>;

// Trapezoidal quadrature over [-R, R]. Linear in g, exact for affine g.
double quadrature(const Grid& grid, std::span<const double> g);

// Probability density sampled at the grid nodes. Nonnegative values; the mass
// is accepted as-is when within 1e-8 of one, otherwise the constructor
// renormalizes (and records that it did). The CDF is cached at construction.
class GridDensity {
 public:
  GridDensity(GridPtr grid, std::vector<double> values);

  const Grid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](int i) const { return values_[i]; }
  int size() const { return grid_->n; }

  double mass() const { return mass_; }
  double raw_mass() const { return raw_mass_; }
  bool was_renormalized() const { return renormalized_; }

  // Cumulative distribution F_i = \int_{-R}^{x_i} f, nondecreasing, F_0 = 0.
  const std::vector<double>& cdf() const { return cdf_; }
  double cdf_at(double x) const;

  // Piecewise-linear inverse of the CDF. Flat stretches resolve to their
  // leftmost point. t outside (0, mass) clamps to the domain ends.
  double quantile(double t) const;

  // Linear interpolation of the density values; zero outside [-R, R].
  double value_at(double x) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  std::vector<double> cdf_;
  double mass_ = 0.0;
  double raw_mass_ = 0.0;
  bool renormalized_ = false;
};

// Comparability bounds of f against the reference m: c = min f/m, C = max f/m.
struct ConeBounds {
  double c = 0.0;
  double C = 0.0;
  int excluded_cells = 0;  // cells where m vanished and the ratio was skipped
};

ConeBounds cone_measure(const GridDensity& f, const GridDensity& m);

}  // namespace uflow
