#pragma once

#include <cmath>
#include <vector>

#include "uflow/potential.hpp"

namespace uflow::test {

inline EquilibriumModel make_model(PotentialKind kind, double r = 2.0,
                                   double R = 15.0, int n = 2001,
                                   std::vector<double> params = {}) {
  PotentialSpec spec;
  spec.kind = kind;
  spec.r = r;
  spec.params = std::move(params);
  return build_equilibrium(spec, Grid::make(R, n));
}

// multiplicative tilt of m, renormalized by the GridDensity constructor
inline GridDensity tilt(const EquilibriumModel& model, double a, double om = 1.0,
                        double ph = 0.0) {
  const Grid& g = model.grid();
  std::vector<double> f(g.n);
  for (int i = 0; i < g.n; ++i)
    f[i] = model.m()[i] * (1.0 + a * std::sin(om * g.nodes[i] + ph));
  return GridDensity(model.grid_ptr(), std::move(f));
}

// translate of m sampled on the same grid, renormalized; the sample point is
// clamped to the window so boundary nodes stay positive
inline GridDensity translate(const EquilibriumModel& model, double h) {
  const Grid& g = model.grid();
  std::vector<double> f(g.n);
  for (int i = 0; i < g.n; ++i) {
    double x = std::min(std::max(g.nodes[i] - h, -g.R), g.R);
    f[i] = model.m().value_at(x);
  }
  return GridDensity(model.grid_ptr(), std::move(f));
}

}  // namespace uflow::test
