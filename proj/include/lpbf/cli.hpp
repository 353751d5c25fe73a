#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace lpbf {

enum ExitCode : int { kExitOk = 0, kExitValidation = 1, kExitRuntime = 2, kExitPartial = 3 };

struct CommandResult {
    int exit_code = kExitOk;
    std::string summary;
    std::vector<std::filesystem::path> artifacts;
};

/// Parses `args` (without the program name) and runs one subcommand.
/// Normal output goes to `out`, diagnostics to `err`.
CommandResult run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lpbf
