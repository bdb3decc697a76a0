#pragma once

#include <iosfwd>

namespace rc::app {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_runtime = 2 };

/// Entry point of the `rc` tool. Subcommands: generate, bench, train,
/// predict. Returns 0 on success, 1 on usage or configuration errors and 2
/// on runtime failures; diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rc::app
