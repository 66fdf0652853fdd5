#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace intentmine::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kDataError = 2,
  kInternal = 3,
};

/// Parses `args` (without the program name) and runs one subcommand:
/// cluster, evaluate, grid, propagate, export, bench, serve, synth.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace intentmine::cli
