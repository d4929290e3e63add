#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "quasispec/scenario.hpp"

namespace quasispec::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

const std::vector<std::string>& subcommands();

/// Runs one subcommand, writing artifacts under config.output_dir and progress
/// to `log`. Library errors are mapped to exit codes and reported on `log`.
int run(const std::string& subcommand, const ScenarioConfig& config, std::ostream& log);

}  // namespace quasispec::cli
