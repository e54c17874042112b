#include <CLI11.hpp>
#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "uflow/commands.hpp"

namespace {

std::vector<double> parse_values_csv(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for weighted ultrafast diffusion on the line"};
  app.require_subcommand(1);

  std::string config_path, out_dir, param, values_csv;
  int64_t seed_override = -1;

  auto add_common = [&](CLI::App* cmd, bool needs_config) {
    if (needs_config)
      cmd->add_option("--config", config_path, "JSON config file")->required();
    cmd->add_option("--out", out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", seed_override, "RNG seed (overrides config)");
  };

  CLI::App* run = app.add_subcommand("run", "end-to-end decay run with audits");
  add_common(run, true);
  CLI::App* verify = app.add_subcommand("verify", "randomized inequality audits");
  add_common(verify, true);
  CLI::App* oracle = app.add_subcommand("oracle", "oracle self-tests");
  oracle->add_option("--seed", seed_override, "RNG seed");
  CLI::App* sweep = app.add_subcommand("sweep", "parameter sweep of runs");
  add_common(sweep, true);
  sweep->add_option("--param", param, "parameter name")->required();
  sweep->add_option("--values", values_csv, "comma-separated values")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (oracle->parsed())
      return uflow::cmd_oracle(seed_override >= 0 ? seed_override : 1);

    uflow::RunConfig cfg = uflow::load_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (seed_override >= 0) cfg.seed = static_cast<uint64_t>(seed_override);

    if (run->parsed()) return uflow::cmd_run(cfg);
    if (verify->parsed()) return uflow::cmd_verify(cfg);
    if (sweep->parsed())
      return uflow::cmd_sweep(cfg, param, parse_values_csv(values_csv));
  } catch (const uflow::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return uflow::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return uflow::kExitNumeric;
  }
  return uflow::kExitConfig;
}
