#include "uflow/solver.hpp"

#include <algorithm>
#include <cmath>

#include "uflow/ot1d.hpp"

namespace uflow {

namespace {

// f^{-(r+1)} with a multiplicative fast path for small integer exponents
struct InvPow {
  double e;
  int ie;
  bool fast;
  explicit InvPow(double exponent) : e(exponent) {
    ie = static_cast<int>(std::lround(e));
    fast = std::abs(e - ie) < 1e-12 && ie >= 1 && ie <= 9;
  }
  double operator()(double f) const {
    if (fast) {
      double inv = 1.0 / f;
      double p = inv;
      for (int k = 1; k < ie; ++k) p *= inv;
      return p;
    }
    return std::pow(f, -e);
  }
};

struct StepCore {
  const Grid& g;
  const std::vector<double>& rho;
  const std::vector<double>& m;
  double r;
  InvPow invpow;

  StepCore(const EquilibriumModel& model)
      : g(model.grid()),
        rho(model.rho()),
        m(model.m().values()),
        r(model.r()),
        invpow(model.r() + 1.0) {}

  // pressure p = rho f^{-(r+1)}; returns max p and the u range
  void pressure(const std::vector<double>& f, std::vector<double>& p, double& pmax,
                double& umin, double& umax) const {
    pmax = 0.0;
    umin = 1e300;
    umax = 0.0;
    for (int i = 0; i < g.n; ++i) {
      if (f[i] <= 0.0) throw DomainError("solver: nonpositive density");
      p[i] = rho[i] * invpow(f[i]);
      pmax = std::max(pmax, p[i]);
      double u = f[i] / m[i];
      umin = std::min(umin, u);
      umax = std::max(umax, u);
    }
  }

  double energy(const std::vector<double>& f, const std::vector<double>& p) const {
    // rho f^{-r} = p * f
    double s = 0.0;
    for (int i = 0; i < g.n; ++i) s += g.weight(i) * p[i] * f[i];
    return s;
  }

  // true if the update stayed positive
  bool apply(const std::vector<double>& f, const std::vector<double>& p, double dt,
             std::vector<double>& out) const {
    const int n = g.n;
    const double dx = g.dx;
    double Jl = 0.0;  // boundary face
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      double Jr = 0.0;
      if (i + 1 < n)
        Jr = r * 0.5 * (f[i] + f[i + 1]) * (p[i + 1] - p[i]) / dx;
      double vol = g.weight(i);
      double v = f[i] - dt * (Jr - Jl) / vol;
      if (v <= 0.0) ok = false;
      out[i] = v;
      Jl = Jr;
    }
    return ok;
  }
};

}  // namespace

std::vector<double> flux(const GridDensity& f, const EquilibriumModel& model) {
  StepCore core(model);
  const int n = f.size();
  std::vector<double> p(n);
  double pmax, umin, umax;
  core.pressure(f.values(), p, pmax, umin, umax);
  std::vector<double> J(n + 1, 0.0);
  for (int i = 0; i + 1 < n; ++i)
    J[i + 1] = core.r * 0.5 * (f[i] + f[i + 1]) * (p[i + 1] - p[i]) / model.grid().dx;
  return J;
}

double adaptive_dt(const GridDensity& f, const EquilibriumModel& model, double safety) {
  StepCore core(model);
  const int n = f.size();
  std::vector<double> p(n);
  double pmax, umin, umax;
  core.pressure(f.values(), p, pmax, umin, umax);
  double r = model.r();
  double Dmax = r * (r + 1.0) * pmax;
  return safety * model.grid().dx * model.grid().dx / (2.0 * Dmax);
}

FlowState step(const FlowState& state, double dt, const EquilibriumModel& model) {
  StepCore core(model);
  const int n = state.f.size();
  std::vector<double> p(n), out(n);
  double pmax, umin, umax;
  core.pressure(state.f.values(), p, pmax, umin, umax);
  int halvings = 0;
  while (!core.apply(state.f.values(), p, dt, out)) {
    dt *= 0.5;
    if (++halvings > 30)
      throw NumericError("solver: step rejected 30 times (stiffness)");
  }
  FlowState next{state.t + dt, GridDensity(state.f.grid_ptr(), out), dt,
                 state.step_count + 1, std::min(state.u_min_seen, umin),
                 std::max(state.u_max_seen, umax)};
  return next;
}

Trajectory run(const GridDensity& f0, const EquilibriumModel& model, double t_end,
               double diag_every, double safety, std::optional<ConeBounds> cone_ref) {
  if (!(t_end > 0.0)) throw ConfigError("solver.t_end must be positive");
  if (!(diag_every > 0.0)) throw ConfigError("solver.diag_every must be positive");
  StepCore core(model);
  const int n = f0.size();
  const double r = model.r();
  std::vector<double> f = f0.values(), p(n), fnew(n);
  Trajectory traj;
  traj.min_energy_slack = 1e300;
  double t = 0.0;
  double F_prev = 0.0;
  bool have_prev = false;
  double dt_last = 0.0;
  int diag_idx = 0;

  auto record = [&](double F_here) {
    GridDensity fd(f0.grid_ptr(), f);
    FunctionalReport rep = functional_report(fd, model);
    SnapshotRow row;
    row.t = t;
    row.F = F_here;
    row.F_gap = rep.F_gap;
    row.I = rep.I;
    row.L2sq = rep.L2sq;
    row.W2_to_m = w2_distance(fd, model.m());
    row.mass = quadrature(model.grid(), f);
    ConeBounds cb = cone_measure(fd, model.m());
    row.u_min = cb.c;
    row.u_max = cb.C;
    row.dt = dt_last;
    traj.rows.push_back(row);
    traj.states.push_back(std::move(fd));
  };

  while (true) {
    double pmax, umin, umax;
    core.pressure(f, p, pmax, umin, umax);
    traj.u_min_seen = std::min(traj.u_min_seen, umin);
    traj.u_max_seen = std::max(traj.u_max_seen, umax);
    double F_cur = core.energy(f, p);
    if (have_prev)
      traj.min_energy_slack = std::min(traj.min_energy_slack, F_prev - F_cur);
    F_prev = F_cur;
    have_prev = true;

    double next_diag = std::min(diag_idx * diag_every, t_end);
    if (t >= next_diag - 1e-13) {
      record(F_cur);
      ++diag_idx;
      next_diag = std::min(diag_idx * diag_every, t_end);
    }
    if (t >= t_end - 1e-13) break;

    double dt = safety * core.g.dx * core.g.dx / (2.0 * r * (r + 1.0) * pmax);
    dt = std::min(dt, next_diag - t);
    int halvings = 0;
    while (!core.apply(f, p, dt, fnew)) {
      dt *= 0.5;
      if (++halvings > 30)
        throw NumericError("solver: step rejected 30 times (stiffness)");
    }
    f.swap(fnew);
    t += dt;
    dt_last = dt;
    ++traj.total_steps;
  }
  if (cone_ref) {
    if (traj.u_min_seen < cone_ref->c * (1.0 - 1e-3) ||
        traj.u_max_seen > cone_ref->C * (1.0 + 1e-3))
      traj.cone_warning = true;
  }
  if (traj.min_energy_slack > 1e299) traj.min_energy_slack = 0.0;
  return traj;
}

TruncationScheme setup_truncation(const EquilibriumModel& model, const GridDensity& f0,
                                  double k) {
  const Grid& g = model.grid();
  if (!(k > 0.0) || k > g.R + 1e-12)
    throw ConfigError("truncation.k must lie in (0, R]");
  double inside = f0.cdf_at(k) - f0.cdf_at(-k);
  if (1.0 - inside > 0.10)
    throw ConfigError("truncation.k too aggressive: more than 10% of the initial "
                      "mass lies outside [-k, k]");
  TruncationScheme s;
  s.k = k;
  // sub-grid with spacing matched to the ambient grid
  int half = std::max(1, static_cast<int>(std::lround(k / g.dx)));
  int nk = 2 * half + 1;
  auto sub = Grid::make(k, nk);
  std::vector<double> V(nk);
  for (int i = 0; i < nk; ++i) V[i] = model.V(sub->nodes[i]);
  auto mass_of = [&](double a) {
    double acc = 0.0;
    for (int i = 0; i < nk; ++i) acc += sub->weight(i) * std::exp(-a * V[i]);
    return acc;
  };
  double lo = 1e-3, hi = 10.0;
  if (mass_of(lo) < 1.0 || mass_of(hi) > 1.0)
    throw NumericError("setup_truncation: cannot bracket the normalization a_k");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    (mass_of(mid) > 1.0 ? lo : hi) = mid;
  }
  s.a_k = 0.5 * (lo + hi);
  s.b_k = 1.0 / inside;
  std::vector<double> mk(nk), fk(nk);
  for (int i = 0; i < nk; ++i) {
    mk[i] = std::exp(-s.a_k * V[i]);
    fk[i] = s.b_k * f0.value_at(sub->nodes[i]);
  }
  GridDensity mkd(sub, std::move(mk));
  GridDensity fkd(sub, std::move(fk));
  ConeBounds cb = cone_measure(fkd, mkd);
  s.c_k = cb.c;
  s.C_k = cb.C;
  return s;
}

TruncatedProblem build_truncated(const EquilibriumModel& model, const GridDensity& f0,
                                 double k) {
  TruncationScheme s = setup_truncation(model, f0, k);
  const Grid& g = model.grid();
  int half = std::max(1, static_cast<int>(std::lround(k / g.dx)));
  auto sub = Grid::make(k, 2 * half + 1);
  // V_k = a_k (V_base - log gamma), folded into the spec transform
  PotentialSpec spec_k = model.spec();
  spec_k.offset = s.a_k * (spec_k.offset - std::log(model.gamma()));
  spec_k.scale = s.a_k * model.spec().scale;
  EquilibriumModel model_k = build_equilibrium(spec_k, sub);
  std::vector<double> fk(sub->n);
  for (int i = 0; i < sub->n; ++i) fk[i] = s.b_k * f0.value_at(sub->nodes[i]);
  GridDensity f0k(sub, std::move(fk));
  return TruncatedProblem{s, std::move(model_k), std::move(f0k)};
}

}  // namespace uflow
