#include "uflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "uflow/csv.hpp"

namespace uflow {

using nlohmann::json;

namespace {

template <typename T>
T get_or(const json& j, const char* section, const char* key, T fallback) {
  if (!j.contains(section)) return fallback;
  const json& s = j.at(section);
  if (!s.contains(key)) return fallback;
  try {
    return s.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config field ") + section + "." + key +
                      " has the wrong type");
  }
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  RunConfig cfg;
  std::string kind = get_or<std::string>(j, "potential", "kind", "log-cosh");
  cfg.potential_kind = potential_kind_from_string(kind);
  cfg.potential_params =
      get_or<std::vector<double>>(j, "potential", "params", {});
  if (j.contains("r")) cfg.r = j.at("r").get<double>();
  cfg.grid_R = get_or<double>(j, "grid", "R", cfg.grid_R);
  cfg.grid_n = get_or<int>(j, "grid", "n", cfg.grid_n);
  cfg.truncation_k = get_or<double>(j, "truncation", "k", cfg.grid_R);
  cfg.initial_kind = get_or<std::string>(j, "initial", "kind", cfg.initial_kind);
  cfg.initial_params = get_or<std::vector<double>>(j, "initial", "params", {});
  cfg.initial_file = get_or<std::string>(j, "initial", "file", "");
  cfg.cone_c = get_or<double>(j, "initial", "c", cfg.cone_c);
  cfg.cone_C = get_or<double>(j, "initial", "C", cfg.cone_C);
  cfg.t_end = get_or<double>(j, "solver", "t_end", cfg.t_end);
  cfg.diag_every = get_or<double>(j, "solver", "diag_every", cfg.diag_every);
  cfg.safety = get_or<double>(j, "solver", "safety", cfg.safety);
  cfg.check_epe_enabled = get_or<bool>(j, "verify", "epe", true);
  cfg.check_hwi_enabled = get_or<bool>(j, "verify", "hwi", true);
  cfg.check_local_wi_enabled = get_or<bool>(j, "verify", "local_wi", true);
  cfg.check_map_bounds_enabled = get_or<bool>(j, "verify", "map_bounds", true);
  cfg.check_geodesic_enabled = get_or<bool>(j, "verify", "geodesic", true);
  cfg.check_hessian_enabled = get_or<bool>(j, "verify", "hessian", true);
  cfg.random_audit_count = get_or<int>(j, "verify", "random_audit_count", 100);
  cfg.seed = get_or<uint64_t>(j, "verify", "seed", 42);
  cfg.output_dir = get_or<std::string>(j, "output", "directory", "out");

  // validation, each message naming the offending field
  if (!(cfg.r > 0.0)) throw ConfigError("r must be positive");
  if (cfg.grid_n % 2 == 0) throw ConfigError("grid.n must be odd");
  if (cfg.grid_n < 3) throw ConfigError("grid.n must be at least 3");
  if (!(cfg.grid_R > 0.0)) throw ConfigError("grid.R must be positive");
  if (!(cfg.truncation_k > 0.0) || cfg.truncation_k > cfg.grid_R + 1e-12)
    throw ConfigError("truncation.k must lie in (0, grid.R]");
  if (!(cfg.cone_c > 0.0 && cfg.cone_c < 1.0))
    throw ConfigError("initial.c must lie in (0, 1)");
  if (!(cfg.cone_C > 1.0)) throw ConfigError("initial.C must exceed 1");
  if (!(cfg.t_end > 0.0)) throw ConfigError("solver.t_end must be positive");
  if (!(cfg.diag_every > 0.0)) throw ConfigError("solver.diag_every must be positive");
  if (!(cfg.safety > 0.0 && cfg.safety <= 1.0))
    throw ConfigError("solver.safety must lie in (0, 1]");
  if (cfg.random_audit_count < 0)
    throw ConfigError("verify.random_audit_count must be nonnegative");
  if (cfg.initial_kind != "tilt" && cfg.initial_kind != "bimodal" &&
      cfg.initial_kind != "translate" && cfg.initial_kind != "file")
    throw ConfigError("initial.kind must be tilt, bimodal, translate or file");
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

std::string RunConfig::to_json() const {
  json j;
  j["potential"]["kind"] = to_string(potential_kind);
  j["potential"]["params"] = potential_params;
  j["r"] = r;
  j["grid"]["R"] = grid_R;
  j["grid"]["n"] = grid_n;
  j["truncation"]["k"] = truncation_k;
  j["initial"]["kind"] = initial_kind;
  j["initial"]["params"] = initial_params;
  j["initial"]["file"] = initial_file;
  j["initial"]["c"] = cone_c;
  j["initial"]["C"] = cone_C;
  j["solver"]["t_end"] = t_end;
  j["solver"]["diag_every"] = diag_every;
  j["solver"]["safety"] = safety;
  j["verify"]["epe"] = check_epe_enabled;
  j["verify"]["hwi"] = check_hwi_enabled;
  j["verify"]["local_wi"] = check_local_wi_enabled;
  j["verify"]["map_bounds"] = check_map_bounds_enabled;
  j["verify"]["geodesic"] = check_geodesic_enabled;
  j["verify"]["hessian"] = check_hessian_enabled;
  j["verify"]["random_audit_count"] = random_audit_count;
  j["verify"]["seed"] = seed;
  // the output directory is deliberately not part of the resolved dump (or of
  // the hash): reruns into different directories must be byte-identical
  return j.dump(2);
}

uint64_t RunConfig::hash() const { return fnv1a(to_json()); }

PotentialSpec make_spec(const RunConfig& cfg) {
  PotentialSpec spec;
  spec.kind = cfg.potential_kind;
  spec.params = cfg.potential_params;
  spec.r = cfg.r;
  return spec;
}

GridDensity make_initial(const RunConfig& cfg, const EquilibriumModel& model) {
  const Grid& g = model.grid();
  const GridDensity& m = model.m();
  std::vector<double> f(g.n);
  if (cfg.initial_kind == "tilt") {
    // u = 1 + a sin(om x + phase); params: a, om, phase
    double a = cfg.initial_params.size() > 0 ? cfg.initial_params[0] : 0.45;
    double om = cfg.initial_params.size() > 1 ? cfg.initial_params[1] : 1.0;
    double ph = cfg.initial_params.size() > 2 ? cfg.initial_params[2] : 0.0;
    for (int i = 0; i < g.n; ++i)
      f[i] = m[i] * (1.0 + a * std::sin(om * g.nodes[i] + ph));
  } else if (cfg.initial_kind == "bimodal") {
    // u = 1 + a1 exp(-(x-x1)^2/s^2) - a2 exp(-(x-x2)^2/s^2)
    double a1 = cfg.initial_params.size() > 0 ? cfg.initial_params[0] : 0.6;
    double a2 = cfg.initial_params.size() > 1 ? cfg.initial_params[1] : 0.35;
    double x1 = cfg.initial_params.size() > 2 ? cfg.initial_params[2] : 2.0;
    double x2 = cfg.initial_params.size() > 3 ? cfg.initial_params[3] : -2.0;
    double s = cfg.initial_params.size() > 4 ? cfg.initial_params[4] : 1.5;
    for (int i = 0; i < g.n; ++i) {
      double x = g.nodes[i];
      double u = 1.0 + a1 * std::exp(-(x - x1) * (x - x1) / (s * s)) -
                 a2 * std::exp(-(x - x2) * (x - x2) / (s * s));
      f[i] = m[i] * u;
    }
  } else if (cfg.initial_kind == "translate") {
    double h = cfg.initial_params.empty() ? 0.5 : cfg.initial_params[0];
    for (int i = 0; i < g.n; ++i) {
      // clamp the sample point so boundary nodes keep the tail value instead
      // of dropping to zero outside the window
      double x = std::min(std::max(g.nodes[i] - h, -g.R), g.R);
      f[i] = m.value_at(x);
    }
  } else if (cfg.initial_kind == "file") {
    std::ifstream in(cfg.initial_file);
    if (!in) throw ConfigError("initial.file: cannot open " + cfg.initial_file);
    std::vector<double> xs, vs;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || std::isalpha(line[0])) continue;
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      double x, v;
      if (ls >> x >> v) {
        xs.push_back(x);
        vs.push_back(v);
      }
    }
    if (xs.size() < 2) throw ConfigError("initial.file: not enough samples");
    for (int i = 0; i < g.n; ++i) {
      double x = g.nodes[i];
      auto it = std::lower_bound(xs.begin(), xs.end(), x);
      if (it == xs.begin())
        f[i] = vs.front();
      else if (it == xs.end())
        f[i] = vs.back();
      else {
        size_t j = it - xs.begin();
        double s = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
        f[i] = vs[j - 1] * (1.0 - s) + vs[j] * s;
      }
      f[i] = std::max(f[i], 0.0);
    }
  }
  GridDensity f0(model.grid_ptr(), std::move(f));
  ConeBounds cb = cone_measure(f0, m);
  if (cb.c < cfg.cone_c * (1.0 - 1e-9) || cb.C > cfg.cone_C * (1.0 + 1e-9))
    throw DomainError("cone check failed: initial datum has f/m in [" +
                      fmt17(cb.c) + ", " + fmt17(cb.C) + "], outside [" +
                      fmt17(cfg.cone_c) + ", " + fmt17(cfg.cone_C) + "]");
  return f0;
}

}  // namespace uflow
