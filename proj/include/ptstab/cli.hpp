#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ptstab {

/// Exit codes: 0 success or bounds met, 2 bounds violated, 1 usage/config error.
enum ExitCode : int { kExitOk = 0, kExitError = 1, kExitViolated = 2 };

/// Environment variable consulted when --out-dir is absent.
inline constexpr const char* kOutDirEnv = "PTSTAB_OUT_DIR";

/// Runs the command line `args` (without the program name).
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ptstab
