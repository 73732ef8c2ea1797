#pragma once

#include <ostream>
#include <span>
#include <string>

namespace homcount::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2, size_guard = 3 };

/// Runs the tool with argv-style arguments (args[0] is the program name).
/// Artifacts go to the paths named in the arguments; results print to `out`,
/// logs and diagnostics to `err`.
int run(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace homcount::cli
