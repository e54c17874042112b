#include "uflow/functional.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace uflow {

double free_energy(const GridDensity& f, const EquilibriumModel& model) {
  const Grid& g = f.grid();
  const auto& rho = model.rho();
  double r = model.r();
  double s = 0.0;
  for (int i = 0; i < g.n; ++i) {
    if (f[i] <= 0.0) throw DomainError("free_energy: density vanishes (outside cone)");
    s += g.weight(i) * rho[i] * std::pow(f[i], -r);
  }
  return s;
}

double dissipation(const GridDensity& f, const EquilibriumModel& model) {
  const Grid& g = f.grid();
  const GridDensity& m = model.m();
  double r = model.r();
  const int n = g.n;
  std::vector<double> w(n);  // u^{-(r+1)}
  for (int i = 0; i < n; ++i) {
    if (m[i] <= 0.0 || f[i] <= 0.0) throw DomainError("dissipation: cone violation");
    w[i] = std::pow(f[i] / m[i], -(r + 1.0));
  }
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    double dw;
    if (i == 0)
      dw = (w[1] - w[0]) / g.dx;
    else if (i == n - 1)
      dw = (w[n - 1] - w[n - 2]) / g.dx;
    else
      dw = (w[i + 1] - w[i - 1]) / (2.0 * g.dx);
    double u = f[i] / m[i];
    s += g.weight(i) * u * dw * dw * m[i];
  }
  return r * r * s;
}

double l2_gap(const GridDensity& f, const EquilibriumModel& model) {
  const Grid& g = f.grid();
  const GridDensity& m = model.m();
  double s = 0.0;
  for (int i = 0; i < g.n; ++i) {
    if (m[i] <= 0.0) continue;
    double d = f[i] / m[i] - 1.0;
    s += g.weight(i) * d * d * m[i];
  }
  return s;
}

FunctionalReport functional_report(const GridDensity& f, const EquilibriumModel& model) {
  FunctionalReport rep;
  rep.F = free_energy(f, model);
  rep.F_gap = rep.F - free_energy(model.m(), model);
  rep.I = dissipation(f, model);
  rep.L2sq = l2_gap(f, model);
  const Grid& g = f.grid();
  const GridDensity& m = model.m();
  double mean = 0.0;
  for (int i = 0; i < g.n; ++i)
    if (m[i] > 0.0) mean += g.weight(i) * (f[i] / m[i] - 1.0) * m[i];
  rep.var_u = rep.L2sq - mean * mean;
  return rep;
}

double h_minus1_norm(const GridDensity& f, const EquilibriumModel& model) {
  const Grid& g = f.grid();
  const GridDensity& m = model.m();
  const auto& Ff = f.cdf();
  const auto& Fm = m.cdf();
  double s = 0.0;
  for (int i = 0; i < g.n; ++i) {
    if (m[i] < 1e-13) continue;
    double d = Fm[i] - Ff[i];
    s += g.weight(i) * d * d / m[i];
  }
  return std::sqrt(s);
}

double poincare_spectral(const Grid& grid, const std::vector<double>& m_values) {
  const int n = grid.n;
  // stiffness K (zero-flux) and lumped mass B, symmetrized S = B^{-1/2} K B^{-1/2}
  std::vector<double> face(n - 1);
  for (int i = 0; i + 1 < n; ++i)
    face[i] = 0.5 * (m_values[i] + m_values[i + 1]) / grid.dx;
  Eigen::VectorXd diag(n), sub(n - 1);
  std::vector<double> B(n);
  for (int i = 0; i < n; ++i) {
    B[i] = grid.weight(i) * m_values[i];
    if (B[i] <= 0.0) throw NumericError("poincare_spectral: vanishing mass cell");
  }
  for (int i = 0; i < n; ++i) {
    double k = 0.0;
    if (i > 0) k += face[i - 1];
    if (i + 1 < n) k += face[i];
    diag[i] = k / B[i];
  }
  for (int i = 0; i + 1 < n; ++i) sub[i] = -face[i] / std::sqrt(B[i] * B[i + 1]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericError("poincare_spectral: tridiagonal eigensolver failed");
  const auto& ev = es.eigenvalues();
  // ev[0] ~ 0 (constants); the gap is the next eigenvalue
  double lam1 = ev[1];
  if (!(lam1 > 0.0)) throw NumericError("poincare_spectral: nonpositive spectral gap");
  return 1.0 / lam1;
}

double poincare_spectral(const EquilibriumModel& model) {
  return poincare_spectral(model.grid(), model.m().values());
}

MuckenhouptResult poincare_muckenhoupt(const Grid& grid, const GridDensity& m) {
  MuckenhouptResult res;
  const int n = grid.n;
  const auto& F = m.cdf();
  const double mass = m.mass();
  double xmed = m.quantile(0.5 * mass);
  // nearest node to the median
  int imed = static_cast<int>(std::lround((xmed + grid.R) / grid.dx));
  imed = std::clamp(imed, 0, n - 1);
  auto inv = [&](int i) {
    if (m[i] < 1e-15) {
      ++res.clipped_cells;
      return 0.0;
    }
    return 1.0 / m[i];
  };
  // right side: sup_{x > med} (mass - F(x)) * int_med^x 1/m
  double acc = 0.0, best = 0.0;
  for (int i = imed + 1; i < n; ++i) {
    acc += 0.5 * grid.dx * (inv(i - 1) + inv(i));
    best = std::max(best, (mass - F[i]) * acc);
  }
  // left side
  acc = 0.0;
  for (int i = imed - 1; i >= 0; --i) {
    acc += 0.5 * grid.dx * (inv(i) + inv(i + 1));
    best = std::max(best, F[i] * acc);
  }
  res.B = best;
  res.lower = best;
  res.upper = 4.0 * best;
  return res;
}

MuckenhouptResult poincare_muckenhoupt(const EquilibriumModel& model) {
  return poincare_muckenhoupt(model.grid(), model.m());
}

}  // namespace uflow
