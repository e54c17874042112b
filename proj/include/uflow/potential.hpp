#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "uflow/density.hpp"

namespace uflow {

enum class PotentialKind {
  LogCosh,         // V = log cosh x + log pi
  SmoothedLaplace, // V = sqrt(eps^2 + x^2), eps = params[0] (default 1)
  Laplace,         // V = |x| + log 2 (kink at the origin)
  Gaussian,        // V = x^2/2 + log sqrt(2 pi); outside the paper assumptions
  ExpPoly,         // V = log(sum_j w_j cosh(a_j x)), params = w0,a0,w1,a1,...
};

PotentialKind potential_kind_from_string(const std::string& s);
std::string to_string(PotentialKind k);

// Analytic description of the potential V with first and second derivatives.
// `shift`, `scale`, `offset` transform the base potential:
//   V(x) = scale * V_base(x - shift) + offset.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::LogCosh;
  std::vector<double> params;
  double r = 2.0;
  double shift = 0.0;
  double scale = 1.0;
  double offset = 0.0;

  double value(double x) const;
  double dvalue(double x) const;
  double ddvalue(double x) const;

  // Certified Lipschitz constant of V (analytic where the kind admits one;
  // the Gaussian has none and returns the sup over the given half-width).
  double lipschitz(double R) const;
  // Certified Lipschitz constant of V'.
  double lipschitz_deriv(double R) const;
};

struct AssumptionReport {
  double min_ddV = 0.0;   // sampled min of V''
  double sup_dV = 0.0;    // sampled sup of |V'|
  double sup_ddV = 0.0;   // sampled sup of |V''|
  bool convex_ok = false;
  bool lipschitz_ok = false;       // sup|V'| <= certified L
  bool lipschitz_deriv_ok = false; // sup|V''| <= certified L'
  std::vector<std::string> notes;
  bool pass() const { return convex_ok && lipschitz_ok && lipschitz_deriv_ok; }
};

// Dense sampled certificate at 10x the grid resolution.
AssumptionReport certify_assumptions(const PotentialSpec& spec, const Grid& grid);

// Equilibrium m = e^{-V}, weight rho = gamma^{-(r+1)} m^{r+1}, with gamma
// fixed so that m has unit mass on the working domain.
class EquilibriumModel {
 public:
  EquilibriumModel(PotentialSpec spec, GridPtr grid, double gamma,
                   GridDensity m, std::vector<double> rho);

  const PotentialSpec& spec() const { return spec_; }
  const Grid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }
  double r() const { return spec_.r; }
  double gamma() const { return gamma_; }
  const GridDensity& m() const { return m_; }
  const std::vector<double>& rho() const { return rho_; }
  double C_V() const { return C_V_; }
  int C_V_excluded_cells() const { return cv_excluded_; }

  // Normalized potential: m = e^{-V}, i.e. V = V_base - log gamma.
  double V(double x) const { return spec_.value(x) - std::log(gamma_); }
  double dV(double x) const { return spec_.dvalue(x); }
  double ddV(double x) const { return spec_.ddvalue(x); }

  // Analytic weight rho = e^{-(r+1) V_base} and its derivatives.
  double rho_at(double x) const;
  double drho_at(double x) const;
  double ddrho_at(double x) const;

 private:
  friend EquilibriumModel build_equilibrium(const PotentialSpec&, GridPtr);
  PotentialSpec spec_;
  GridPtr grid_;
  double gamma_;
  GridDensity m_;
  std::vector<double> rho_;
  double C_V_ = 1.0;
  int cv_excluded_ = 0;
};

EquilibriumModel build_equilibrium(const PotentialSpec& spec, GridPtr grid);

// Smallest C_V >= 1 with C_V^{-1} <= m(x)/min(F(x), 1-F(x)) <= C_V at the
// interior nodes. Cells with min(F, 1-F) < 1e-12 are excluded.
double isoperimetric_constant(const GridDensity& m, int* excluded = nullptr);

}  // namespace uflow
