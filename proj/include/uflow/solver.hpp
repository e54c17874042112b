#pragma once

#include <optional>
#include <vector>

#include "uflow/functional.hpp"
#include "uflow/potential.hpp"

namespace uflow {

struct FlowState {
  double t = 0.0;
  GridDensity f;
  double dt_last = 0.0;
  long step_count = 0;
  double u_min_seen = 1.0;  // cone history along the run
  double u_max_seen = 1.0;
};

struct SnapshotRow {
  double t, F, F_gap, I, L2sq, W2_to_m, mass, u_min, u_max, dt;
};

struct Trajectory {
  std::vector<SnapshotRow> rows;
  std::vector<GridDensity> states;  // densities at the diagnostic times
  double min_energy_slack = 0.0;    // min over steps of F(t) - F(t+dt)
  bool cone_warning = false;
  double u_min_seen = 1.0, u_max_seen = 1.0;
  long total_steps = 0;
};

// Face fluxes J_{i+1/2} = r * f_face * (p_{i+1} - p_i)/dx with p = rho f^{-(r+1)}
// and arithmetic face means; size n+1 with zero at the two boundary faces.
std::vector<double> flux(const GridDensity& f, const EquilibriumModel& model);

// Explicit stability bound dt = safety * dx^2 / (2 max D), D = r(r+1) rho f^{-(r+1)}.
double adaptive_dt(const GridDensity& f, const EquilibriumModel& model,
                   double safety = 0.4);

// One conservative explicit step. Positivity loss rejects the step and halves
// dt, up to 30 times.
FlowState step(const FlowState& state, double dt, const EquilibriumModel& model);

// Integrate to t_end, recording diagnostics every diag_every units of
// simulated time. cone_ref: bounds used for the cone-exit warning.
Trajectory run(const GridDensity& f0, const EquilibriumModel& model, double t_end,
               double diag_every, double safety = 0.4,
               std::optional<ConeBounds> cone_ref = std::nullopt);

// Appendix-style truncation data: V_k = a_k V on [-k, k] with e^{-V_k} a
// probability density, f_0^k = b_k f_0 restricted and renormalized.
struct TruncationScheme {
  double k = 0.0;
  double a_k = 1.0;
  double b_k = 1.0;
  double c_k = 0.0;
  double C_k = 0.0;
};

TruncationScheme setup_truncation(const EquilibriumModel& model,
                                  const GridDensity& f0, double k);

// Truncated model and initial datum on the sub-grid [-k, k], spacing matched
// to the ambient grid.
struct TruncatedProblem {
  TruncationScheme scheme;
  EquilibriumModel model;
  GridDensity f0;
};

TruncatedProblem build_truncated(const EquilibriumModel& model,
                                 const GridDensity& f0, double k);

}  // namespace uflow
