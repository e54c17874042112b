#include "uflow/random_cone.hpp"

#include <cmath>

namespace uflow {

GridDensity random_cone_density(const EquilibriumModel& model, double c, double C,
                                std::mt19937_64& rng) {
  if (!(c > 0.0 && c < 1.0 && C > 1.0))
    throw ConfigError("random_cone_density: need 0 < c < 1 < C");
  const Grid& g = model.grid();
  const GridDensity& m = model.m();
  double Amax = std::min((1.0 - c) / (1.0 + c), (C - 1.0) / (C + 1.0));
  std::uniform_real_distribution<double> uamp(0.2 * Amax, 0.95 * Amax);
  std::uniform_real_distribution<double> uom(0.3, 2.0);
  std::uniform_real_distribution<double> uth(0.0, 2.0 * M_PI);
  double A = uamp(rng);
  const int K = 3;
  double amp[K], om[K], th[K];
  double wsum = 0.0;
  for (int k = 0; k < K; ++k) {
    amp[k] = uamp(rng);
    wsum += amp[k];
    om[k] = uom(rng);
    th[k] = uth(rng);
  }
  for (int k = 0; k < K; ++k) amp[k] *= A / wsum;  // sum |amp| = A
  std::vector<double> f(g.n);
  for (int i = 0; i < g.n; ++i) {
    double u = 1.0;
    for (int k = 0; k < K; ++k) u += amp[k] * std::sin(om[k] * g.nodes[i] + th[k]);
    f[i] = u * m[i];
  }
  return GridDensity(model.grid_ptr(), std::move(f));
}

double TestFunction::value(double x) const {
  double y = (x - x0) / w;
  if (std::abs(y) >= 1.0) return 0.0;
  double q = 1.0 - y * y;
  return q * q * q * std::sin(om * x + th);
}

double TestFunction::dvalue(double x) const {
  double y = (x - x0) / w;
  if (std::abs(y) >= 1.0) return 0.0;
  double q = 1.0 - y * y;
  double s = std::sin(om * x + th), co = std::cos(om * x + th);
  double sp = -6.0 * y * q * q / w;
  return sp * s + q * q * q * om * co;
}

double TestFunction::ddvalue(double x) const {
  double y = (x - x0) / w;
  if (std::abs(y) >= 1.0) return 0.0;
  double q = 1.0 - y * y;
  double s = std::sin(om * x + th), co = std::cos(om * x + th);
  double spp = (-6.0 * q * q + 24.0 * y * y * q) / (w * w);
  double sp = -6.0 * y * q * q / w;
  return spp * s + 2.0 * sp * om * co - q * q * q * om * om * s;
}

TestFunction random_test_function(double R, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ux0(-R / 3.0, R / 3.0);
  std::uniform_real_distribution<double> uw(2.0, R / 2.0);
  std::uniform_real_distribution<double> uom(0.5, 2.5);
  std::uniform_real_distribution<double> uth(0.0, 2.0 * M_PI);
  TestFunction phi;
  phi.x0 = ux0(rng);
  phi.w = uw(rng);
  phi.om = uom(rng);
  phi.th = uth(rng);
  // keep the support strictly interior
  double margin = R - (std::abs(phi.x0) + phi.w);
  if (margin <= 0.5) phi.w += margin - 0.5;
  return phi;
}

}  // namespace uflow
