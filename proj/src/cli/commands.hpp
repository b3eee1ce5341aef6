#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace embgeo::cli {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the command-line tool.
enum ExitCode : int { kOk = 0, kFailure = 1, kUsage = 2 };

/// Runs the tool in-process. `args[0]` is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace embgeo::cli
