#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "uflow/solver.hpp"
#include "helpers.hpp"

using namespace uflow;
using uflow::test::make_model;
using uflow::test::tilt;

TEST_CASE("flux vanishes at equilibrium and at the boundary faces") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 12.0, 1001);
  std::vector<double> J = flux(model.m(), model);
  CHECK(static_cast<int>(J.size()) == model.grid().n + 1);
  CHECK(J.front() == 0.0);
  CHECK(J.back() == 0.0);
  double jmax = 0;
  for (double j : J) jmax = std::max(jmax, std::abs(j));
  CHECK(jmax < 1e-10);
}

TEST_CASE("flux points back toward equilibrium") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 12.0, 1001);
  // bump up the density on the right half: pressure p = rho f^{-(r+1)} drops
  // there, so p decreases left-to-right across the seam and mass must flow
  // left (negative flux at the seam)
  const Grid& g = model.grid();
  std::vector<double> v(g.n);
  for (int i = 0; i < g.n; ++i)
    v[i] = model.m()[i] * (1.0 + 0.3 / (1.0 + std::exp(-4.0 * g.nodes[i])));
  GridDensity f(model.grid_ptr(), std::move(v));
  std::vector<double> J = flux(f, model);
  int seam = g.n / 2;
  CHECK(J[seam] < 0.0);
}

TEST_CASE("arithmetic and harmonic face means agree to second order") {
  auto check_gap = [](int n) {
    auto model = make_model(PotentialKind::LogCosh, 2.0, 12.0, n);
    GridDensity f = tilt(model, 0.3, 1.0, 0.0);
    const Grid& g = model.grid();
    double r = model.r();
    double worst = 0.0;
    for (int i = 0; i + 1 < g.n; ++i) {
      double pa = model.rho()[i] * std::pow(f[i], -(r + 1.0));
      double pb = model.rho()[i + 1] * std::pow(f[i + 1], -(r + 1.0));
      double dpdx = (pb - pa) / g.dx;
      double am = 0.5 * (f[i] + f[i + 1]);
      double hm = 2.0 * f[i] * f[i + 1] / (f[i] + f[i + 1]);
      worst = std::max(worst, std::abs(r * (am - hm) * dpdx));
    }
    return worst;
  };
  double coarse = check_gap(501), fine = check_gap(1001);
  CHECK(coarse / fine > 3.0);  // ~4 for a second-order gap
}

TEST_CASE("adaptive dt scales with dx^2") {
  auto c = make_model(PotentialKind::LogCosh, 2.0, 12.0, 1001);
  auto f = make_model(PotentialKind::LogCosh, 2.0, 12.0, 2001);
  double dtc = adaptive_dt(c.m(), c);
  double dtf = adaptive_dt(f.m(), f);
  CHECK(dtc / dtf == doctest::Approx(4.0).epsilon(1e-2));
}

TEST_CASE("adaptive dt at equilibrium matches the closed formula") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 12.0, 1001);
  const Grid& g = model.grid();
  double r = model.r();
  double dmax = 0;
  for (int i = 0; i < g.n; ++i)
    dmax = std::max(dmax, r * (r + 1.0) * model.rho()[i] *
                              std::pow(model.m()[i], -(r + 1.0)));
  CHECK(adaptive_dt(model.m(), model, 0.4) ==
        doctest::Approx(0.4 * g.dx * g.dx / (2.0 * dmax)).epsilon(1e-12));
}

TEST_CASE("equilibrium is a fixed point of the step") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 12.0, 1001);
  FlowState s{0.0, model.m(), 0.0, 0, 1.0, 1.0};
  double dt = adaptive_dt(model.m(), model);
  FlowState next = step(s, dt, model);
  double err = 0;
  for (int i = 0; i < model.grid().n; ++i)
    err = std::max(err, std::abs(next.f[i] - model.m()[i]));
  CHECK(err < 1e-14);
  CHECK(next.t == doctest::Approx(dt));
  CHECK(next.step_count == 1);
}

TEST_CASE("mass is conserved step by step") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 12.0, 801);
  FlowState s{0.0, tilt(model, 0.4, 1.5, 0.3), 0.0, 0, 1.0, 1.0};
  for (int k = 0; k < 200; ++k) {
    double before = quadrature(model.grid(), s.f.values());
    double dt = adaptive_dt(s.f, model);
    FlowState next = step(s, dt, model);
    CHECK(std::abs(quadrature(model.grid(), next.f.values()) - before) <= 1e-13);
    s = std::move(next);
  }
  CHECK(std::abs(s.f.mass() - 1.0) < 1e-12);
}

TEST_CASE("one step vs two half steps is second order in dt") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 12.0, 801);
  GridDensity f0 = tilt(model, 0.3, 1.0, 0.0);
  auto defect = [&](double dt) {
    FlowState s{0.0, f0, 0.0, 0, 1.0, 1.0};
    FlowState one = step(s, dt, model);
    FlowState half = step(step(s, dt / 2, model), dt / 2, model);
    double d = 0;
    for (int i = 0; i < model.grid().n; ++i)
      d = std::max(d, std::abs(one.f[i] - half.f[i]));
    return d;
  };
  double dt = adaptive_dt(f0, model, 0.2);
  CHECK(defect(dt) / defect(dt / 2) > 3.5);
}

TEST_CASE("run dissipates energy and contracts to equilibrium") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 12.0, 601);
  GridDensity f0 = tilt(model, 0.4, 1.0, 0.0);
  ConeBounds cb = cone_measure(f0, model.m());
  Trajectory tr = run(f0, model, 2.0, 0.25, 0.4, cb);
  REQUIRE(tr.rows.size() >= 5);
  for (size_t i = 1; i < tr.rows.size(); ++i)
    CHECK(tr.rows[i].F <= tr.rows[i - 1].F + 1e-10);
  CHECK(tr.min_energy_slack >= -1e-10);
  CHECK(tr.rows.back().F_gap < tr.rows.front().F_gap * 1e-2);
  CHECK(tr.rows.back().L2sq < tr.rows.front().L2sq);
  CHECK_FALSE(tr.cone_warning);
  for (const auto& row : tr.rows) CHECK(std::abs(row.mass - 1.0) < 1e-12);
}

TEST_CASE("run on the equilibrium is constant") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 12.0, 601);
  Trajectory tr = run(model.m(), model, 0.5, 0.1);
  for (const auto& row : tr.rows) {
    CHECK(row.F_gap < 1e-12);
    CHECK(row.u_min == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(row.u_max == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("cone history stays inside the measured bounds") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 12.0, 601);
  GridDensity f0 = tilt(model, 0.45, 1.0, 0.2);
  ConeBounds cb = cone_measure(f0, model.m());
  Trajectory tr = run(f0, model, 1.0, 0.2, 0.4, cb);
  CHECK(tr.u_min_seen >= cb.c * (1.0 - 1e-3));
  CHECK(tr.u_max_seen <= cb.C * (1.0 + 1e-3));
}

TEST_CASE("truncation at the full radius is a no-op") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 15.0, 1501);
  GridDensity f0 = tilt(model, 0.3, 1.0, 0.0);
  TruncationScheme ts = setup_truncation(model, f0, 15.0);
  CHECK(std::abs(ts.a_k - 1.0) < 1e-10);
  CHECK(std::abs(ts.b_k - 1.0) < 1e-10);
}

TEST_CASE("truncation normalizers tend to one monotonically") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 20.0, 4001);
  GridDensity f0 = tilt(model, 0.3, 1.0, 0.0);
  TruncationScheme t10 = setup_truncation(model, f0, 10.0);
  TruncationScheme t15 = setup_truncation(model, f0, 15.0);
  CHECK(std::abs(t10.a_k - 1.0) > std::abs(t15.a_k - 1.0));
  CHECK(std::abs(t10.b_k - 1.0) > std::abs(t15.b_k - 1.0));
  CHECK(t15.a_k == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("b_k for f0 = m is the inverse restricted mass") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 20.0, 4001);
  TruncationScheme ts = setup_truncation(model, model.m(), 10.0);
  const Grid& g = model.grid();
  std::vector<double> win(g.n, 0.0);
  for (int i = 0; i < g.n; ++i)
    if (std::abs(g.nodes[i]) <= 10.0 + 1e-12) win[i] = model.m()[i];
  CHECK(ts.b_k == doctest::Approx(1.0 / quadrature(g, win)).epsilon(1e-6));
}

TEST_CASE("over-aggressive truncation is rejected") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 20.0, 2001);
  CHECK_THROWS_AS(setup_truncation(model, model.m(), 0.2), ConfigError);
}

TEST_CASE("the truncated problem is a consistent model") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 20.0, 4001);
  GridDensity f0 = tilt(model, 0.3, 1.0, 0.0);
  TruncatedProblem tp = build_truncated(model, f0, 12.0);
  CHECK(tp.model.grid().R == doctest::Approx(12.0).epsilon(1e-6));
  CHECK(tp.model.grid().dx == doctest::Approx(model.grid().dx).epsilon(1e-10));
  CHECK(std::abs(tp.model.m().mass() - 1.0) < 1e-10);
  CHECK(std::abs(tp.f0.mass() - 1.0) < 1e-10);
  // V_k = a_k V pointwise on the window
  double x = 3.7;
  CHECK(tp.model.spec().value(x) ==
        doctest::Approx(tp.scheme.a_k * model.V(x)).epsilon(1e-8));
  // and the truncated flow still dissipates
  Trajectory tr = run(tp.f0, tp.model, 0.5, 0.1);
  CHECK(tr.min_energy_slack >= -1e-10);
}
