#ifndef VELOTOPO_CLI_HPP
#define VELOTOPO_CLI_HPP

#include <iosfwd>

namespace velotopo {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitDomain = 2 };

/// Entry point of the `velotopo` tool. Subcommands: zeros, euler, chern,
/// winding, phase-diagram, field-dump. Structured output goes to `out` (or
/// the --out file); diagnostics go to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace velotopo

#endif  // VELOTOPO_CLI_HPP
