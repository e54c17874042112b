#include "uflow/verify.hpp"

#include <algorithm>
#include <cmath>

#include "uflow/functional.hpp"

namespace uflow {

namespace {
constexpr double kTolAnalytic = 1e-6;
constexpr double kTolDiscrete = 1e-3;

InequalityReport make_report(std::string name, double lhs, double rhs,
                             const char* tol_class) {
  InequalityReport rep;
  rep.name = std::move(name);
  rep.lhs = lhs;
  rep.rhs = rhs;
  rep.slack = rhs - lhs;
  double tol = (std::string(tol_class) == "analytic") ? kTolAnalytic : kTolDiscrete;
  rep.pass = rep.slack >= -tol * std::abs(rhs) - 1e-14;
  rep.tol_class = tol_class;
  return rep;
}
}  // namespace

double lambda_bound(double c_geo, double C_geo, double L, double r) {
  (void)C_geo;  // the bound only involves the lower cone constant
  if (!(c_geo > 0.0) || !(r > 0.0)) throw DomainError("lambda_bound: invalid inputs");
  return std::pow(c_geo, -(r + 1.0)) * (L * L / r + L);
}

HessianAudit hessian_form(const GridDensity& f, const TestFunction& phi,
                          const EquilibriumModel& model, double lambda) {
  const Grid& g = f.grid();
  if (std::abs(phi.x0) + phi.w >= g.R)
    throw DomainError("hessian_form: test function support touches the boundary");
  double r = model.r();
  double t1 = 0.0, t2 = 0.0, t3 = 0.0, gsq = 0.0;
  for (int i = 0; i < g.n; ++i) {
    double x = g.nodes[i];
    double fr = std::pow(f[i], -r);
    double p1 = phi.dvalue(x), p2 = phi.ddvalue(x);
    double w = g.weight(i);
    t1 += w * model.drho_at(x) * fr * p1 * p2;
    t2 += w * model.rho_at(x) * fr * p2 * p2;
    t3 += w * model.ddrho_at(x) * fr * p1 * p1;
    gsq += w * p1 * p1 * f[i];
  }
  HessianAudit audit;
  audit.Q = 2.0 * (r + 1.0) * t1 + r * (r + 1.0) * t2 + t3;
  audit.grad_sq = gsq;
  audit.bound = -lambda * gsq;
  audit.pass = audit.Q >= audit.bound - kTolDiscrete * (std::abs(audit.bound) + 1e-12);
  return audit;
}

InequalityReport check_hwi(const GridDensity& f, const EquilibriumModel& model,
                           double lambda) {
  FunctionalReport fr = functional_report(f, model);
  double W2 = w2_distance(f, model.m());
  double rhs = W2 * std::sqrt(std::max(fr.I, 0.0)) + 0.5 * lambda * W2 * W2;
  return make_report("hwi", fr.F_gap, rhs, "discrete");
}

InequalityReport check_epe(const GridDensity& f, const EquilibriumModel& model,
                           double K_epe) {
  FunctionalReport fr = functional_report(f, model);
  if (fr.I < 1e-14 && fr.F_gap > 1e-12)
    throw NumericError("check_epe: vanishing dissipation with positive energy gap");
  return make_report("epe", fr.F_gap, K_epe * fr.I, "discrete");
}

InequalityReport check_local_wi(const GridDensity& f, const EquilibriumModel& model,
                                double C_cone, double C_P, double exponent_shift) {
  double r = model.r();
  double I = dissipation(f, model);
  double W2 = w2_distance(f, model.m());
  double K = 4.0 * C_P * C_P * std::pow(C_cone, 2.0 * r + exponent_shift) /
             (r * r * (r + 1.0) * (r + 1.0));
  std::string name = exponent_shift == 3.0 ? "local_wi" : "local_wi_2r1";
  return make_report(std::move(name), W2 * W2, K * I, "discrete");
}

InequalityReport check_map_bounds(const TransportMap& T, const ConstantsLedger& led,
                                  double dx) {
  double lo = led.c / (led.C * led.C_V * led.C_V);
  double hi = led.C * led.C_V * led.C_V / led.c;
  double eps = 10.0 * dx;
  double worst = 0.0;  // violation amount across both derivative bounds
  for (size_t i = 0; i < T.Tprime.size(); ++i) {
    double tp = T.Tprime[i];
    if (!std::isfinite(tp)) continue;
    worst = std::max(worst, lo - eps - tp);
    worst = std::max(worst, tp - (hi + eps));
  }
  InequalityReport rep;
  rep.name = "map_bounds";
  bool deriv_ok = worst <= 0.0;
  bool disp_ok = T.sup_displacement <= led.A_disp * (1.0 + kTolDiscrete);
  rep.lhs = T.sup_displacement;
  rep.rhs = led.A_disp;
  rep.slack = rep.rhs - rep.lhs;
  rep.pass = deriv_ok && disp_ok;
  rep.tol_class = "discrete";
  return rep;
}

GeodesicAudit geodesic_cone_audit(const GridDensity& f, const EquilibriumModel& model,
                                  int n_alpha) {
  TransportMap T = transport_map(model.m(), f);
  const Grid& g = model.grid();
  // Within a displacement of the window edge the pushforward leaves an
  // artificial vacuum (mass moved inward has nothing behind it), so the ratio
  // there reflects the truncation, not the geodesic.
  const double margin = T.sup_displacement + 2.0 * g.dx;
  auto sweep = [&](int na, double& cmin, double& cmax, double& drift) {
    cmin = 1e300;
    cmax = 0.0;
    drift = 0.0;
    for (int j = 0; j < na; ++j) {
      double alpha = static_cast<double>(j) / (na - 1);
      double d = 0.0;
      GridDensity fa = displacement_interpolate(model.m(), T, alpha, &d);
      drift = std::max(drift, d);
      for (int i = 0; i < g.n; ++i) {
        if (std::abs(g.nodes[i]) > g.R - margin) continue;
        if (model.m()[i] <= 0.0) continue;
        double u = fa[i] / model.m()[i];
        cmin = std::min(cmin, u);
        cmax = std::max(cmax, u);
      }
    }
  };
  GeodesicAudit audit;
  double c1, C1, d1, c2, C2, d2;
  sweep(n_alpha, c1, C1, d1);
  sweep(2 * (n_alpha - 1) + 1, c2, C2, d2);
  audit.c_prime = std::min(c1, c2);
  audit.C_prime = std::max(C1, C2);
  audit.max_mass_drift = std::max(d1, d2);
  if (audit.max_mass_drift > 1e-6)
    throw NumericError("geodesic_cone_audit: interpolation mass drift above 1e-6");
  audit.stable = std::abs(c2 - c1) <= 1e-3 * std::abs(c1) &&
                 std::abs(C2 - C1) <= 1e-3 * std::abs(C1);
  return audit;
}

std::pair<double, double> fit_decay(const Trajectory& traj) {
  if (traj.rows.empty()) throw NumericError("fit_decay: empty trajectory");
  double t_end = traj.rows.back().t;
  std::vector<std::pair<double, double>> pts;
  for (const auto& row : traj.rows) {
    if (row.t < 0.25 * t_end) continue;
    if (row.L2sq <= 1e-13) continue;
    pts.emplace_back(row.t, std::log(row.L2sq));
  }
  if (pts.size() < 5)
    throw NumericError("fit_decay: fewer than 5 usable snapshots in the fit window");
  double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) throw NumericError("fit_decay: degenerate fit window");
  double slope = (n * sxy - sx * sy) / denom;
  double intercept = (sy - slope * sx) / n;
  return {std::exp(intercept), -slope};
}

std::pair<double, double> linear_growth_constants(const EquilibriumModel& model) {
  const Grid& g = model.grid();
  double x75 = model.m().quantile(0.75 * model.m().mass());
  double ell1 = model.dV(x75);
  if (!(ell1 > 0.0))
    throw NumericError("linear_growth_constants: V' nonpositive at the 75% quantile "
                       "(potential flat beyond the anchor)");
  // smallest ell2 with |V(y)-V(x)| >= ell1 |y-x| - ell2 for same-sign x, y:
  // per side, ell2 = sup h - inf h with h(x) = ell1 |x| - V(x)
  double ell2 = 0.0;
  for (int side = 0; side < 2; ++side) {
    double hmin = 1e300, hmax = -1e300;
    for (int i = 0; i < g.n; ++i) {
      double x = g.nodes[i];
      if (side == 0 && x < 0.0) continue;
      if (side == 1 && x > 0.0) continue;
      double h = ell1 * std::abs(x) - model.V(x);
      hmin = std::min(hmin, h);
      hmax = std::max(hmax, h);
    }
    ell2 = std::max(ell2, hmax - hmin);
  }
  return {ell1, ell2};
}

double displacement_bound(double c, double C, double C_V, double ell1, double ell2) {
  return 2.0 * (ell2 + std::log(C * C * C_V * C_V / c)) / ell1;
}

double epe_constant(double C, double C_P, double lambda, double r) {
  double rp1 = r + 1.0;
  return 2.0 * C_P * std::pow(C, r + 1.5) / (r * rp1) +
         2.0 * lambda * C_P * C_P * std::pow(C, 2.0 * r + 3.0) / (r * r * rp1 * rp1);
}

}  // namespace uflow
