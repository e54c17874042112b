#pragma once

#include <vector>

#include "uflow/density.hpp"

namespace uflow {

// Monotone optimal map between two grid densities, T = F_nu^{-1} o F_mu.
// T' comes from the Monge-Ampere relation T'(x) = mu(x) / nu(T(x)).
struct TransportMap {
  GridPtr grid;                 // grid of the source
  std::vector<double> T;        // T(x_i), nondecreasing
  std::vector<double> Tprime;   // T'(x_i); NaN at flagged cells
  std::vector<int> flagged;     // cells where nu vanished at the hit point
  double sup_displacement = 0;  // sup_i |T(x_i) - x_i|
};

TransportMap transport_map(const GridDensity& mu, const GridDensity& nu);

// W2 distance via the quantile representation: the quantile difference is
// piecewise linear between the merged CDF breakpoints of the two densities,
// so each piece integrates exactly with Simpson's rule.
double w2_distance(const GridDensity& mu, const GridDensity& nu);

// Displacement interpolation f_alpha = pushforward of m by
// (1-alpha) x + alpha T(x); f_0 = m, f_1 = target of T. The interpolated CDF
// (values and exact slopes at the image points) is resampled to the grid by a
// monotone C^1 Hermite interpolant; the result is renormalized.
// `mass_drift` (optional) receives |mass - 1| before renormalization.
GridDensity displacement_interpolate(const GridDensity& m, const TransportMap& T,
                                     double alpha, double* mass_drift = nullptr);

// Isoperimetric profile Is_f(t) = f(F^{-1}(t)) on a uniform t-grid of nt
// interior points; t within 1e-6 of 0 or 1 is excluded.
std::vector<std::pair<double, double>> isoperimetric_profile(const GridDensity& f,
                                                             int nt = 512);

// Atomic measures for the brute-force oracle.
struct Atom {
  double x = 0.0;
  double w = 0.0;
};

// Squared W2 cost of the monotone (sorted, northwest-corner) coupling, the
// optimal one in 1D for convex costs. Up to 32 atoms each, equal total mass.
double w2sq_atoms_monotone(std::vector<Atom> mu, std::vector<Atom> nu);

// Squared W2 cost from the quantile representation (piecewise-constant
// quantiles integrated over the merged cumulative-weight breakpoints).
double w2sq_atoms_quantile(std::vector<Atom> mu, std::vector<Atom> nu);

// Exhaustive assignment enumeration; equal counts (<= 8) and equal weights.
double w2sq_atoms_enumerate(std::vector<Atom> mu, std::vector<Atom> nu);

}  // namespace uflow
