#include "uflow/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace uflow {

namespace {

// log cosh x without overflow
double log_cosh(double x) {
  double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

// sech^2 x without overflow
double sech2(double x) {
  double a = std::abs(x);
  double e = std::exp(-a);
  double c = 0.5 * (1.0 + e * e);  // cosh(a) * e^{-a}
  double s = e / c;                // sech(a)
  return s * s;
}

struct ExpPolyEval {
  double V, dV, ddV;
};

// V = log(sum_j w_j cosh(a_j x)), evaluated as a log-sum-exp over the signed
// exponents +-a_j x with weights w_j / 2.
ExpPolyEval expoly_eval(const std::vector<double>& params, double x) {
  if (params.size() < 2 || params.size() % 2 != 0)
    throw ConfigError("potential.params for exp-poly must be pairs (w, a)");
  double zmax = -std::numeric_limits<double>::infinity();
  for (size_t j = 0; j + 1 < params.size(); j += 2) {
    if (!(params[j] > 0.0)) throw ConfigError("exp-poly weights must be positive");
    zmax = std::max(zmax, params[j + 1] * x);
    zmax = std::max(zmax, -params[j + 1] * x);
  }
  double S = 0.0, S1 = 0.0, S2 = 0.0;  // sums of e^{z-zmax}, a e^{..}, a^2 e^{..}
  for (size_t j = 0; j + 1 < params.size(); j += 2) {
    double w = 0.5 * params[j], a = params[j + 1];
    double ep = w * std::exp(a * x - zmax);
    double em = w * std::exp(-a * x - zmax);
    S += ep + em;
    S1 += a * (ep - em);
    S2 += a * a * (ep + em);
  }
  ExpPolyEval e;
  e.V = zmax + std::log(S);
  e.dV = S1 / S;
  e.ddV = S2 / S - e.dV * e.dV;
  return e;
}

}  // namespace

PotentialKind potential_kind_from_string(const std::string& s) {
  if (s == "log-cosh") return PotentialKind::LogCosh;
  if (s == "smoothed-laplace") return PotentialKind::SmoothedLaplace;
  if (s == "laplace") return PotentialKind::Laplace;
  if (s == "gaussian") return PotentialKind::Gaussian;
  if (s == "exp-poly") return PotentialKind::ExpPoly;
  throw ConfigError("potential.kind: unknown kind '" + s + "'");
}

std::string to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::LogCosh: return "log-cosh";
    case PotentialKind::SmoothedLaplace: return "smoothed-laplace";
    case PotentialKind::Laplace: return "laplace";
    case PotentialKind::Gaussian: return "gaussian";
    case PotentialKind::ExpPoly: return "exp-poly";
  }
  return "?";
}

double PotentialSpec::value(double x) const {
  double y = x - shift;
  double v;
  switch (kind) {
    case PotentialKind::LogCosh:
      v = log_cosh(y) + std::log(std::numbers::pi);
      break;
    case PotentialKind::SmoothedLaplace: {
      double eps = params.empty() ? 1.0 : params[0];
      v = std::sqrt(eps * eps + y * y);
      break;
    }
    case PotentialKind::Laplace:
      v = std::abs(y) + std::numbers::ln2;
      break;
    case PotentialKind::Gaussian:
      v = 0.5 * y * y + 0.5 * std::log(2.0 * std::numbers::pi);
      break;
    case PotentialKind::ExpPoly:
      v = expoly_eval(params, y).V;
      break;
    default:
      throw ConfigError("unknown potential kind");
  }
  return scale * v + offset;
}

double PotentialSpec::dvalue(double x) const {
  double y = x - shift;
  double d;
  switch (kind) {
    case PotentialKind::LogCosh:
      d = std::tanh(y);
      break;
    case PotentialKind::SmoothedLaplace: {
      double eps = params.empty() ? 1.0 : params[0];
      d = y / std::sqrt(eps * eps + y * y);
      break;
    }
    case PotentialKind::Laplace:
      d = (y > 0.0) ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
      break;
    case PotentialKind::Gaussian:
      d = y;
      break;
    case PotentialKind::ExpPoly:
      d = expoly_eval(params, y).dV;
      break;
    default:
      throw ConfigError("unknown potential kind");
  }
  return scale * d;
}

double PotentialSpec::ddvalue(double x) const {
  double y = x - shift;
  double d;
  switch (kind) {
    case PotentialKind::LogCosh:
      d = sech2(y);
      break;
    case PotentialKind::SmoothedLaplace: {
      double eps = params.empty() ? 1.0 : params[0];
      double q = eps * eps + y * y;
      d = eps * eps / (q * std::sqrt(q));
      break;
    }
    case PotentialKind::Laplace:
      d = 0.0;  // away from the kink
      break;
    case PotentialKind::Gaussian:
      d = 1.0;
      break;
    case PotentialKind::ExpPoly:
      d = expoly_eval(params, y).ddV;
      break;
    default:
      throw ConfigError("unknown potential kind");
  }
  return scale * d;
}

double PotentialSpec::lipschitz(double R) const {
  double L;
  switch (kind) {
    case PotentialKind::LogCosh:
    case PotentialKind::SmoothedLaplace:
    case PotentialKind::Laplace:
      L = 1.0;
      break;
    case PotentialKind::Gaussian:
      L = R + std::abs(shift);  // only on the truncation
      break;
    case PotentialKind::ExpPoly: {
      L = 0.0;
      for (size_t j = 1; j < params.size(); j += 2) L = std::max(L, std::abs(params[j]));
      break;
    }
    default:
      throw ConfigError("unknown potential kind");
  }
  return scale * L;
}

double PotentialSpec::lipschitz_deriv(double R) const {
  double L;
  switch (kind) {
    case PotentialKind::LogCosh:
      L = 1.0;
      break;
    case PotentialKind::SmoothedLaplace: {
      double eps = params.empty() ? 1.0 : params[0];
      L = 1.0 / eps;
      break;
    }
    case PotentialKind::Laplace:
      L = std::numeric_limits<double>::infinity();  // kink at the origin
      break;
    case PotentialKind::Gaussian:
      L = 1.0;
      break;
    case PotentialKind::ExpPoly: {
      double amax = 0.0;
      for (size_t j = 1; j < params.size(); j += 2) amax = std::max(amax, std::abs(params[j]));
      L = amax * amax;
      break;
    }
    default:
      throw ConfigError("unknown potential kind");
  }
  (void)R;
  return scale * L;
}

AssumptionReport certify_assumptions(const PotentialSpec& spec, const Grid& grid) {
  AssumptionReport rep;
  const int N = 10 * (grid.n - 1) + 1;
  const double h = 2.0 * grid.R / (N - 1);
  rep.min_ddV = std::numeric_limits<double>::infinity();
  rep.sup_dV = 0.0;
  rep.sup_ddV = 0.0;
  const bool laplace_kink = (spec.kind == PotentialKind::Laplace);
  for (int i = 0; i < N; ++i) {
    double x = -grid.R + i * h;
    if (laplace_kink && std::abs(x - spec.shift) < h) continue;  // skip the kink cell
    rep.min_ddV = std::min(rep.min_ddV, spec.ddvalue(x));
    rep.sup_dV = std::max(rep.sup_dV, std::abs(spec.dvalue(x)));
    rep.sup_ddV = std::max(rep.sup_ddV, std::abs(spec.ddvalue(x)));
  }
  const double L = spec.lipschitz(grid.R);
  const double Lp = spec.lipschitz_deriv(grid.R);
  rep.convex_ok = rep.min_ddV >= -1e-12;
  rep.lipschitz_ok = rep.sup_dV <= L * (1.0 + 1e-12) + 1e-12;
  rep.lipschitz_deriv_ok = rep.sup_ddV <= Lp * (1.0 + 1e-12) + 1e-12;
  if (spec.kind == PotentialKind::Gaussian) {
    rep.notes.push_back("V' unbounded on the line; Lipschitz only on the truncation, "
                        "outside the standing assumptions (exploration mode)");
    rep.lipschitz_ok = false;
  }
  if (laplace_kink) {
    rep.notes.push_back("V' is discontinuous at x = " + std::to_string(spec.shift) +
                        "; sampled sup|V''| excludes the kink cell");
    rep.lipschitz_deriv_ok = false;
  }
  rep.notes.push_back("sampled certificate at 10x grid resolution");
  return rep;
}

double isoperimetric_constant(const GridDensity& m, int* excluded) {
  const auto& F = m.cdf();
  const double mass = m.mass();
  double cv = 1.0;
  int skipped = 0;
  // Cells whose tail mass is comparable to what the truncation cut off are
  // contaminated: the discrete CDF misses roughly m(+-R) worth of tail (unit
  // decay rate), which inflates the ratio arbitrarily near the ends. Keep a
  // four-digit margin above that estimate.
  const double lost_tail = m[0] + m[m.size() - 1];
  const double cutoff = std::max(1e-12, 1e4 * lost_tail);
  for (int i = 1; i + 1 < m.size(); ++i) {
    double tail = std::min(F[i], mass - F[i]);
    if (tail < cutoff) {
      ++skipped;
      continue;
    }
    double ratio = m[i] / tail;
    cv = std::max(cv, std::max(ratio, 1.0 / ratio));
  }
  if (excluded) *excluded = skipped;
  return cv;
}

EquilibriumModel::EquilibriumModel(PotentialSpec spec, GridPtr grid, double gamma,
                                   GridDensity m, std::vector<double> rho)
    : spec_(std::move(spec)),
      grid_(std::move(grid)),
      gamma_(gamma),
      m_(std::move(m)),
      rho_(std::move(rho)) {
  C_V_ = isoperimetric_constant(m_, &cv_excluded_);
}

double EquilibriumModel::rho_at(double x) const {
  return std::exp(-(spec_.r + 1.0) * spec_.value(x));
}

double EquilibriumModel::drho_at(double x) const {
  double rp1 = spec_.r + 1.0;
  return -rp1 * spec_.dvalue(x) * rho_at(x);
}

double EquilibriumModel::ddrho_at(double x) const {
  double rp1 = spec_.r + 1.0;
  double dv = spec_.dvalue(x);
  return (rp1 * rp1 * dv * dv - rp1 * spec_.ddvalue(x)) * rho_at(x);
}

EquilibriumModel build_equilibrium(const PotentialSpec& spec, GridPtr grid) {
  if (!(spec.r > 0.0)) throw ConfigError("r must be positive");
  AssumptionReport rep = certify_assumptions(spec, *grid);
  if (!rep.convex_ok)
    throw DomainError("build_equilibrium: potential fails the convexity assumption "
                      "(sampled min V'' = " + std::to_string(rep.min_ddV) + ")");
  const int n = grid->n;
  std::vector<double> mb(n);
  for (int i = 0; i < n; ++i) mb[i] = std::exp(-spec.value(grid->nodes[i]));
  double Z = quadrature(*grid, mb);
  if (Z < 1e-6)
    throw ConfigError("build_equilibrium: e^{-V} not normalizable on the truncation "
                      "(mass " + std::to_string(Z) + ")");
  double gamma = 1.0 / Z;
  std::vector<double> mvals(n), rho(n);
  double rp1 = spec.r + 1.0;
  for (int i = 0; i < n; ++i) {
    mvals[i] = gamma * mb[i];
    rho[i] = std::pow(mb[i], rp1);  // = e^{-(r+1) V_base} = gamma^{-(r+1)} m^{r+1}
  }
  GridDensity m(grid, std::move(mvals));
  return EquilibriumModel(spec, grid, gamma, std::move(m), std::move(rho));
}

}  // namespace uflow
