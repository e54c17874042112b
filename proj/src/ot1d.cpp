#include "uflow/ot1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace uflow {

TransportMap transport_map(const GridDensity& mu, const GridDensity& nu) {
  const Grid& g = mu.grid();
  TransportMap map;
  map.grid = mu.grid_ptr();
  map.T.resize(g.n);
  map.Tprime.resize(g.n);
  const auto& F = mu.cdf();
  for (int i = 0; i < g.n; ++i) {
    double t = std::min(F[i], nu.mass());
    double y = nu.quantile(t);
    map.T[i] = y;
    double nv = nu.value_at(y);
    if (nv <= 1e-300) {
      map.Tprime[i] = std::numeric_limits<double>::quiet_NaN();
      map.flagged.push_back(i);
    } else {
      map.Tprime[i] = mu[i] / nv;
    }
    map.sup_displacement = std::max(map.sup_displacement, std::abs(y - g.nodes[i]));
  }
  // enforce exact monotonicity against rounding in the quantile inversion
  for (int i = 1; i < g.n; ++i) map.T[i] = std::max(map.T[i], map.T[i - 1]);
  return map;
}

double w2_distance(const GridDensity& mu, const GridDensity& nu) {
  double tmax = std::min(mu.mass(), nu.mass());
  std::vector<double> ts;
  ts.reserve(mu.size() + nu.size() + 2);
  ts.push_back(0.0);
  for (double t : mu.cdf())
    if (t > 0.0 && t < tmax) ts.push_back(t);
  for (double t : nu.cdf())
    if (t > 0.0 && t < tmax) ts.push_back(t);
  ts.push_back(tmax);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  auto d2 = [&](double t) {
    double d = mu.quantile(t) - nu.quantile(t);
    return d * d;
  };
  double acc = 0.0;
  for (size_t k = 0; k + 1 < ts.size(); ++k) {
    double a = ts[k], b = ts[k + 1];
    double h = b - a;
    if (h <= 0.0) continue;
    acc += h / 6.0 * (d2(a) + 4.0 * d2(0.5 * (a + b)) + d2(b));
  }
  return std::sqrt(std::max(acc, 0.0));
}

GridDensity displacement_interpolate(const GridDensity& m, const TransportMap& map,
                                     double alpha, double* mass_drift) {
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw DomainError("displacement_interpolate: alpha outside [0, 1]");
  if (alpha == 0.0) {
    if (mass_drift) *mass_drift = 0.0;
    return m;
  }
  const Grid& g = m.grid();
  const int n = g.n;
  // image points and the interpolated Monge-Ampere density there
  std::vector<double> y(n), Fy(n), gy(n);
  const auto& F = m.cdf();
  for (int i = 0; i < n; ++i) {
    y[i] = (1.0 - alpha) * g.nodes[i] + alpha * map.T[i];
    Fy[i] = F[i];
    double tp = map.Tprime[i];
    if (!std::isfinite(tp)) tp = 1.0;  // flagged cell: fall back to the identity slope
    double den = (1.0 - alpha) + alpha * tp;
    gy[i] = den > 1e-300 ? m[i] / den : 0.0;
  }
  for (int i = 1; i < n; ++i)
    if (y[i] < y[i - 1]) y[i] = y[i - 1];
  if (y.front() < -g.R - 1e-9 || y.back() > g.R + 1e-9)
    throw NumericError("displacement_interpolate: image points leave the truncation");
  // resample from the C^1 Hermite interpolant of the CDF through (y_i, F_i)
  // with exact slopes g_i; evaluated monotonically left to right
  int seg = 0;
  auto cdf_hermite = [&](double x) {
    if (x <= y.front()) return Fy.front();
    if (x >= y.back()) return Fy.back();
    while (seg + 2 < n && y[seg + 1] <= x) ++seg;
    double h = y[seg + 1] - y[seg];
    if (h <= 1e-300) return Fy[seg];
    double s = (x - y[seg]) / h;
    double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    double h10 = s * (1.0 - s) * (1.0 - s) * h;
    double h01 = s * s * (3.0 - 2.0 * s);
    double h11 = s * s * (s - 1.0) * h;
    return Fy[seg] * h00 + gy[seg] * h10 + Fy[seg + 1] * h01 + gy[seg + 1] * h11;
  };
  // density at x_j as the midpoint difference of the resampled CDF: the half
  // shifts telescope through the trapezoid weights, so the total mass is
  // Fy.back() - Fy.front() exactly (up to rounding and negativity clips)
  const double hx = g.dx;
  std::vector<double> out(n, 0.0);
  double left = cdf_hermite(g.nodes[0]);  // = Fy.front() when y covers the grid
  for (int j = 0; j < n; ++j) {
    double right = (j + 1 < n) ? cdf_hermite(g.nodes[j] + 0.5 * hx)
                               : cdf_hermite(g.nodes[n - 1]);
    double w = (j == 0 || j == n - 1) ? 0.5 * hx : hx;
    out[j] = std::max(right - left, 0.0) / w;
    left = right;
  }
  double mass = quadrature(g, out);
  if (mass_drift) *mass_drift = std::abs(mass - 1.0);
  for (double& v : out) v /= mass;
  return GridDensity(m.grid_ptr(), std::move(out));
}

std::vector<std::pair<double, double>> isoperimetric_profile(const GridDensity& f, int nt) {
  std::vector<std::pair<double, double>> out;
  out.reserve(nt);
  for (int j = 1; j < nt; ++j) {
    double t = static_cast<double>(j) / nt;
    if (t < 1e-6 || 1.0 - t < 1e-6) continue;
    out.emplace_back(t, f.value_at(f.quantile(t)));
  }
  return out;
}

namespace {

void check_atoms(const std::vector<Atom>& mu, const std::vector<Atom>& nu,
                 size_t cap = 32) {
  if (mu.size() > cap || nu.size() > cap)
    throw DomainError("atom oracle: too many atoms");
  double wm = 0.0, wn = 0.0;
  for (const auto& a : mu) wm += a.w;
  for (const auto& a : nu) wn += a.w;
  if (std::abs(wm - wn) > 1e-12 * std::max(1.0, std::abs(wm)))
    throw DomainError("atom oracle: total masses differ");
}

void sort_atoms(std::vector<Atom>& a) {
  std::sort(a.begin(), a.end(), [](const Atom& p, const Atom& q) { return p.x < q.x; });
}

}  // namespace

double w2sq_atoms_monotone(std::vector<Atom> mu, std::vector<Atom> nu) {
  check_atoms(mu, nu);
  sort_atoms(mu);
  sort_atoms(nu);
  double cost = 0.0;
  size_t i = 0, j = 0;
  double a = mu.empty() ? 0.0 : mu[0].w;
  double b = nu.empty() ? 0.0 : nu[0].w;
  while (i < mu.size() && j < nu.size()) {
    double w = std::min(a, b);
    double d = mu[i].x - nu[j].x;
    cost += w * d * d;
    a -= w;
    b -= w;
    if (a <= 1e-15) {
      ++i;
      if (i < mu.size()) a = mu[i].w;
    }
    if (b <= 1e-15) {
      ++j;
      if (j < nu.size()) b = nu[j].w;
    }
  }
  return cost;
}

double w2sq_atoms_quantile(std::vector<Atom> mu, std::vector<Atom> nu) {
  // the quantile route has no combinatorial blow-up, so it also serves as an
  // independent cross-check against grid densities of arbitrary size
  check_atoms(mu, nu, 1u << 20);
  sort_atoms(mu);
  sort_atoms(nu);
  double total = 0.0;
  for (const auto& a : mu) total += a.w;
  // cumulative breakpoints of both step quantiles
  std::vector<double> ts{0.0};
  double acc = 0.0;
  for (const auto& a : mu) ts.push_back(acc += a.w);
  acc = 0.0;
  for (const auto& a : nu) ts.push_back(acc += a.w);
  ts.push_back(total);
  std::sort(ts.begin(), ts.end());
  auto q = [](const std::vector<Atom>& at, double t) {
    double c = 0.0;
    for (const auto& a : at) {
      c += a.w;
      if (c >= t) return a.x;
    }
    return at.back().x;
  };
  double cost = 0.0;
  for (size_t k = 0; k + 1 < ts.size(); ++k) {
    double h = ts[k + 1] - ts[k];
    if (h <= 0.0) continue;
    double tm = 0.5 * (ts[k] + ts[k + 1]);
    double d = q(mu, tm) - q(nu, tm);
    cost += h * d * d;
  }
  return cost;
}

double w2sq_atoms_enumerate(std::vector<Atom> mu, std::vector<Atom> nu) {
  if (mu.size() != nu.size() || mu.size() > 8)
    throw DomainError("enumeration oracle: equal counts up to 8 atoms");
  for (size_t i = 1; i < mu.size(); ++i)
    if (std::abs(mu[i].w - mu[0].w) > 1e-12 || std::abs(nu[i].w - nu[0].w) > 1e-12)
      throw DomainError("enumeration oracle: equal weights required");
  std::vector<int> perm(mu.size());
  std::iota(perm.begin(), perm.end(), 0);
  double best = std::numeric_limits<double>::infinity();
  do {
    double c = 0.0;
    for (size_t i = 0; i < mu.size(); ++i) {
      double d = mu[i].x - nu[perm[i]].x;
      c += mu[i].w * d * d;
    }
    best = std::min(best, c);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace uflow
