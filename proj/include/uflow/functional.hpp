#pragma once

#include "uflow/potential.hpp"

namespace uflow {

struct FunctionalReport {
  double F = 0.0;      // free energy
  double F_gap = 0.0;  // F[f] - F[m]
  double I = 0.0;      // dissipation, >= 0
  double L2sq = 0.0;   // int |u - 1|^2 m
  double var_u = 0.0;  // Var_m(u)
};

// Free energy F[f] = int rho / f^r.
double free_energy(const GridDensity& f, const EquilibriumModel& model);

// Dissipation I[f] = r^2 int u |d/dx u^{-(r+1)}|^2 m, central differences in
// the interior and one-sided at the ends.
double dissipation(const GridDensity& f, const EquilibriumModel& model);

// int |f/m - 1|^2 m.
double l2_gap(const GridDensity& f, const EquilibriumModel& model);

FunctionalReport functional_report(const GridDensity& f, const EquilibriumModel& model);

// ||u - 1||_{H^{-1}(m)} from the 1D zero-flux elliptic solve: the weighted
// gradient of the solution is (F_m - F_f)/m, so the squared norm is
// int (F_m - F_f)^2 / m. Cells with m below 1e-13 are clipped.
double h_minus1_norm(const GridDensity& f, const EquilibriumModel& model);

// Poincare constant as 1/lambda_1 of the generator g -> -(1/m)(m g')' with
// zero-flux ends, via the symmetric tridiagonal eigenproblem.
double poincare_spectral(const Grid& grid, const std::vector<double>& m_values);
double poincare_spectral(const EquilibriumModel& model);

struct MuckenhouptResult {
  double B = 0.0;      // max over the two sides of sup tail-mass * int 1/m
  double lower = 0.0;  // B
  double upper = 0.0;  // 4B
  int clipped_cells = 0;
};

MuckenhouptResult poincare_muckenhoupt(const Grid& grid, const GridDensity& m);
MuckenhouptResult poincare_muckenhoupt(const EquilibriumModel& model);

}  // namespace uflow
