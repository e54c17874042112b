#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uflow/potential.hpp"

namespace uflow {

struct RunConfig {
  // potential
  PotentialKind potential_kind = PotentialKind::LogCosh;
  std::vector<double> potential_params;
  double r = 2.0;
  // grid
  double grid_R = 15.0;
  int grid_n = 2001;
  // truncation
  double truncation_k = 15.0;
  // initial datum
  std::string initial_kind = "tilt";  // tilt | bimodal | translate | file
  std::vector<double> initial_params;
  std::string initial_file;
  double cone_c = 0.5;
  double cone_C = 2.0;
  // solver
  double t_end = 6.0;
  double diag_every = 0.05;
  double safety = 0.4;
  // verify
  bool check_epe_enabled = true;
  bool check_hwi_enabled = true;
  bool check_local_wi_enabled = true;
  bool check_map_bounds_enabled = true;
  bool check_geodesic_enabled = true;
  bool check_hessian_enabled = true;
  int random_audit_count = 100;
  uint64_t seed = 42;
  // output
  std::string output_dir = "out";

  std::string to_json() const;  // resolved config, deterministic key order
  uint64_t hash() const;
};

RunConfig parse_config_json(const std::string& text);
RunConfig load_config(const std::string& path);

PotentialSpec make_spec(const RunConfig& cfg);

// Initial datum per config; throws DomainError naming the cone check when the
// datum leaves [c m, C m].
GridDensity make_initial(const RunConfig& cfg, const EquilibriumModel& model);

}  // namespace uflow
