#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uflow/config.hpp"

namespace uflow {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

// End-to-end decay run: trajectory CSV, constants ledger, decay fit, plots.
int cmd_run(const RunConfig& cfg);

// Randomized inequality audits on seeded cone densities; reports CSV.
int cmd_verify(const RunConfig& cfg);

// Oracle self-tests: atomic W2 routes, refinement studies, Poincare brackets.
int cmd_oracle(uint64_t seed);

// Independent runs over one parameter, one subdirectory per value.
int cmd_sweep(const RunConfig& cfg, const std::string& parameter,
              const std::vector<double>& values);

}  // namespace uflow
