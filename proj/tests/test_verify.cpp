#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "uflow/verify.hpp"
#include "helpers.hpp"

using namespace uflow;
using uflow::test::make_model;
using uflow::test::tilt;
using uflow::test::translate;

TEST_CASE("lambda bound closed forms") {
  CHECK(lambda_bound(0.5, 2.0, 1.0, 2.0) == doctest::Approx(12.0).epsilon(1e-14));
  CHECK(lambda_bound(1.0, 1.0, 0.0, 2.0) == doctest::Approx(0.0));
  CHECK(lambda_bound(1.0, 1.0, 1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("epe constant closed form") {
  double C = 2.0, C_P = 1.5, lambda = 12.0, r = 2.0;
  double want = 2.0 * C_P * std::pow(C, r + 1.5) / (r * (r + 1.0)) +
                2.0 * lambda * C_P * C_P * std::pow(C, 2.0 * r + 3.0) /
                    (r * r * (r + 1.0) * (r + 1.0));
  CHECK(epe_constant(C, C_P, lambda, r) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("displacement bound closed form") {
  double c = 0.5, C = 2.0, cv = 1.3, l1 = 0.9, l2 = 0.4;
  double want = 2.0 * (l2 + std::log(C * C * cv * cv / c)) / l1;
  CHECK(displacement_bound(c, C, cv, l1, l2) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("linear growth constants of log-cosh") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 15.0, 2001);
  auto [l1, l2] = linear_growth_constants(model);
  CHECK(l1 > 0.0);
  CHECK(l1 <= 1.0 + 1e-12);  // |V'| = |tanh| <= 1
  CHECK(l2 >= 0.0);
  // the bound must actually hold on the grid
  const Grid& g = model.grid();
  for (int i = 0; i < g.n; i += 59)
    for (int j = i; j < g.n; j += 97) {
      if (g.nodes[i] * g.nodes[j] < 0) continue;
      double lhs = std::abs(model.V(g.nodes[j]) - model.V(g.nodes[i]));
      double rhs = l1 * std::abs(g.nodes[j] - g.nodes[i]) - l2;
      CHECK(lhs >= rhs - 1e-9);
    }
}

TEST_CASE("test function is C^1 with matching derivatives") {
  TestFunction phi{0.3, 2.0, 1.7, 0.4};
  double h = 1e-6;
  for (double x : {-1.0, 0.0, 0.5, 1.9}) {
    double fd = (phi.value(x + h) - phi.value(x - h)) / (2 * h);
    CHECK(phi.dvalue(x) == doctest::Approx(fd).epsilon(1e-5));
    double fd2 = (phi.dvalue(x + h) - phi.dvalue(x - h)) / (2 * h);
    CHECK(phi.ddvalue(x) == doctest::Approx(fd2).epsilon(1e-4));
  }
  CHECK(phi.value(0.3 + 2.5) == 0.0);
  CHECK(phi.dvalue(0.3 - 2.5) == 0.0);
}

TEST_CASE("hessian form vanishes for constant phi and passes at random") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 15.0, 2001);
  GeodesicAudit ga = geodesic_cone_audit(tilt(model, 0.3, 1.0, 0.0), model);
  double lambda = lambda_bound(ga.c_prime, ga.C_prime, 1.0, model.r());

  // at the minimizer the second variation along any geodesic is nonnegative
  TestFunction bump{0.0, 3.0, 0.0, M_PI / 2};
  HessianAudit ha = hessian_form(model.m(), bump, model, lambda);
  CHECK(ha.Q >= -1e-6 * (std::abs(ha.Q) + 1.0));
  CHECK(ha.pass);

  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    GridDensity f = random_cone_density(model, 0.5, 2.0, rng);
    TestFunction phi = random_test_function(model.grid().R, rng);
    HessianAudit h = hessian_form(f, phi, model, lambda);
    CHECK(h.pass);
    CHECK(h.Q >= h.bound - 1e-3 * std::abs(h.bound) - 1e-9);
  }
}

TEST_CASE("random cone densities really live in the cone") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 15.0, 2001);
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    GridDensity f = random_cone_density(model, 0.5, 2.0, rng);
    ConeBounds cb = cone_measure(f, model.m());
    CHECK(cb.c >= 0.5 - 1e-12);
    CHECK(cb.C <= 2.0 + 1e-12);
  }
}

TEST_CASE("hwi inequality on random cone densities") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 15.0, 2001);
  std::mt19937_64 rng(29);
  GridDensity probe = random_cone_density(model, 0.5, 2.0, rng);
  GeodesicAudit ga = geodesic_cone_audit(probe, model);
  double lambda = lambda_bound(ga.c_prime, ga.C_prime, 1.0, model.r());
  for (int trial = 0; trial < 20; ++trial) {
    GridDensity f = random_cone_density(model, 0.5, 2.0, rng);
    InequalityReport rep = check_hwi(f, model, lambda);
    CHECK(rep.pass);
    CHECK(rep.slack >= 0.0);
  }
}

TEST_CASE("epe inequality on random cone densities") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 15.0, 2001);
  double C_P = poincare_spectral(model);
  std::mt19937_64 rng(31);
  GridDensity probe = random_cone_density(model, 0.5, 2.0, rng);
  GeodesicAudit ga = geodesic_cone_audit(probe, model);
  double lambda = lambda_bound(ga.c_prime, ga.C_prime, 1.0, model.r());
  double K = epe_constant(ga.C_prime, C_P, lambda, model.r());
  for (int trial = 0; trial < 20; ++trial) {
    GridDensity f = random_cone_density(model, 0.5, 2.0, rng);
    InequalityReport rep = check_epe(f, model, K);
    CHECK(rep.pass);
  }
  InequalityReport at_eq = check_epe(model.m(), model, K);
  CHECK(at_eq.pass);
}

TEST_CASE("local wi with the proof exponent on random cone densities") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 15.0, 2001);
  double C_P = poincare_spectral(model);
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 20; ++trial) {
    GridDensity f = random_cone_density(model, 0.5, 2.0, rng);
    ConeBounds cb = cone_measure(f, model.m());
    InequalityReport rep = check_local_wi(f, model, cb.C, C_P, 3.0);
    CHECK(rep.pass);
    // the statement exponent 2r+1 gives a smaller rhs; record, don't gate
    InequalityReport weak = check_local_wi(f, model, cb.C, C_P, 1.0);
    CHECK(weak.rhs <= rep.rhs);
  }
}

TEST_CASE("local wi ratio is stable on a small-translate family") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 15.0, 4001);
  double C_P = poincare_spectral(model);
  double prev_ratio = -1.0;
  for (double h : {0.02, 0.01, 0.005}) {
    GridDensity f = translate(model, h);
    InequalityReport rep = check_local_wi(f, model, 1.2, C_P, 3.0);
    double ratio = rep.lhs / (rep.rhs + 1e-300);
    if (prev_ratio > 0) CHECK(ratio == doctest::Approx(prev_ratio).epsilon(0.05));
    prev_ratio = ratio;
  }
}

TEST_CASE("map bounds audit passes for cone densities") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 15.0, 3001);
  auto [l1, l2] = linear_growth_constants(model);
  ConstantsLedger led;
  led.L = 1.0;
  led.r = model.r();
  led.c = 0.5;
  led.C = 2.0;
  led.C_V = model.C_V();
  led.ell1 = l1;
  led.ell2 = l2;
  led.A_disp = displacement_bound(led.c, led.C, led.C_V, l1, l2);
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    GridDensity f = random_cone_density(model, 0.5, 2.0, rng);
    TransportMap tm = transport_map(model.m(), f);
    InequalityReport rep = check_map_bounds(tm, led, model.grid().dx);
    CHECK(rep.pass);
  }
  TransportMap id = transport_map(model.m(), model.m());
  CHECK(check_map_bounds(id, led, model.grid().dx).pass);
  CHECK(id.sup_displacement <= led.A_disp);
}

TEST_CASE("geodesic cone audit of the equilibrium is trivial") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 12.0, 1501);
  GeodesicAudit ga = geodesic_cone_audit(model.m(), model);
  // the CDF resampling acts as a (1,6,1)/8 filter, so the trivial geodesic
  // carries an O(dx^2) ripple of about (dx^2/8) |m''/m|
  CHECK(ga.c_prime == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(ga.C_prime == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(ga.stable);
}

TEST_CASE("geodesic cone audit is refinement stable on a tilted datum") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 15.0, 2001);
  GridDensity f = tilt(model, 0.4, 1.0, 0.3);
  GeodesicAudit ga = geodesic_cone_audit(f, model);
  CHECK(ga.stable);
  CHECK(ga.max_mass_drift < 1e-6);
  ConeBounds cb = cone_measure(f, model.m());
  CHECK(ga.c_prime <= cb.c + 1e-9);
  CHECK(ga.C_prime >= cb.C - 1e-9);
  CHECK(ga.c_prime > 0.0);
  CHECK(std::isfinite(ga.C_prime));
}

TEST_CASE("translate geodesic stays within the lipschitz envelope") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 15.0, 3001);
  double h = 0.4;
  GridDensity f = translate(model, h);
  GeodesicAudit ga = geodesic_cone_audit(f, model);
  // u_alpha is controlled by e^{L h} for L-Lipschitz V and displacement <= h
  double envelope = std::exp(1.0 * h) * 1.01;
  CHECK(ga.C_prime <= envelope);
  CHECK(ga.c_prime >= 1.0 / envelope);
}

TEST_CASE("decay fit recovers a synthetic exponential exactly") {
  Trajectory traj;
  for (int i = 0; i <= 40; ++i) {
    double t = 0.25 * i;
    SnapshotRow row{};
    row.t = t;
    row.L2sq = 3.0 * std::exp(-0.7 * t);
    traj.rows.push_back(row);
  }
  auto [A, a] = fit_decay(traj);
  CHECK(A == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(a == doctest::Approx(0.7).epsilon(1e-10));
}

TEST_CASE("decay fit rejects an at-equilibrium trajectory") {
  Trajectory traj;
  for (int i = 0; i <= 30; ++i) {
    SnapshotRow row{};
    row.t = 0.1 * i;
    row.L2sq = 1e-16;
    traj.rows.push_back(row);
  }
  CHECK_THROWS_AS(fit_decay(traj), NumericError);
}

TEST_CASE("inequality reports carry consistent slack") {
  auto model = make_model(PotentialKind::LogCosh, 2.0, 12.0, 1201);
  GridDensity f = tilt(model, 0.3, 1.0, 0.0);
  InequalityReport rep = check_hwi(f, model, 12.0);
  CHECK(rep.slack == doctest::Approx(rep.rhs - rep.lhs).epsilon(1e-14));
  CHECK((rep.tol_class == "analytic" || rep.tol_class == "discrete"));
}
