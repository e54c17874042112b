#pragma once

#include <string>
#include <vector>

#include "uflow/ot1d.hpp"
#include "uflow/potential.hpp"
#include "uflow/random_cone.hpp"
#include "uflow/solver.hpp"

namespace uflow {

// Every proof constant for a given configuration.
struct ConstantsLedger {
  double L = 0.0, r = 0.0, c = 0.0, C = 0.0;   // inputs
  double C_V = 1.0, C_P = 0.0;                 // isoperimetric / Poincare
  double c_prime = 0.0, C_prime = 0.0;         // empirical geodesic cone
  double lambda = 0.0;                         // Hessian lower-bound constant
  double ell1 = 0.0, ell2 = 0.0;               // linear growth of V
  double A_disp = 0.0;                         // displacement bound
  double K_epe = 0.0;                          // entropy-production constant
  double A_fit = 0.0, a_fit = 0.0;             // decay fit
};

struct InequalityReport {
  std::string name;
  double lhs = 0.0, rhs = 0.0, slack = 0.0;
  bool pass = false;
  std::string tol_class;  // "analytic" (1e-6) or "discrete" (1e-3)
  int snapshot_id = -1;
};

// lambda = c_geo^{-(r+1)} (L^2/r + L), with the geodesic cone constant c'.
double lambda_bound(double c_geo, double C_geo, double L, double r);

struct HessianAudit {
  double Q = 0.0;          // quadratic form value
  double bound = 0.0;      // -lambda int (phi')^2 f
  double grad_sq = 0.0;    // int (phi')^2 f
  bool pass = false;
};

// Q[phi] = 2(r+1) int (rho'/f^r) phi' phi'' + r(r+1) int (rho/f^r) (phi'')^2
//        + int (rho''/f^r) (phi')^2, with analytic rho', rho''.
HessianAudit hessian_form(const GridDensity& f, const TestFunction& phi,
                          const EquilibriumModel& model, double lambda);

InequalityReport check_hwi(const GridDensity& f, const EquilibriumModel& model,
                           double lambda);
InequalityReport check_epe(const GridDensity& f, const EquilibriumModel& model,
                           double K_epe);
// exponent: 2r+3 (proof chain) or 2r+1 (lemma statement)
InequalityReport check_local_wi(const GridDensity& f, const EquilibriumModel& model,
                                double C_cone, double C_P, double exponent_shift = 3.0);
InequalityReport check_map_bounds(const TransportMap& T, const ConstantsLedger& led,
                                  double dx);

struct GeodesicAudit {
  double c_prime = 0.0, C_prime = 0.0;
  bool stable = false;       // alpha-grid doubling changes bounds <= 1e-3 relative
  double max_mass_drift = 0.0;
};

GeodesicAudit geodesic_cone_audit(const GridDensity& f, const EquilibriumModel& model,
                                  int n_alpha = 17);

// Least-squares fit of log L2sq(t) over [t_end/4, t_end] (L2sq > 1e-13 only).
// Returns (A_fit, a_fit) with L2sq ~ A_fit e^{-a_fit t}.
std::pair<double, double> fit_decay(const Trajectory& traj);

// ell1 = V'(75% quantile of m); ell2 = smallest constant with
// |V(y) - V(x)| >= ell1 |y - x| - ell2 for same-sign x, y on the grid.
std::pair<double, double> linear_growth_constants(const EquilibriumModel& model);

// A_disp = 2 (ell2 + log(C^2 C_V^2 / c)) / ell1.
double displacement_bound(double c, double C, double C_V, double ell1, double ell2);

double epe_constant(double C, double C_P, double lambda, double r);

}  // namespace uflow
