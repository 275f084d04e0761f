#pragma once

#include <string>

#include "config.hpp"

namespace iwaves::cli {

enum ExitCode { kOk = 0, kConfigError = 2, kNumericalError = 3 };

int cmd_rotnum(const RunConfig& config);
int cmd_eigs(const RunConfig& config);
int cmd_specmeasure(const RunConfig& config);
int cmd_evolve(const RunConfig& config);
int cmd_rightinv(const RunConfig& config);

/// Dispatches on config.command.
int run(const RunConfig& config);

/// Parses, runs and maps exceptions to exit codes; messages go to stderr.
int main_entry(int argc, const char* const* argv);

}  // namespace iwaves::cli
