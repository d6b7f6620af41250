#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace bandembed {

inline constexpr const char* kVersion = "0.1.0";

/// Exit codes of the command line tool.
enum ExitCode : int { kExitPass = 0, kExitAssertion = 1, kExitInvalid = 2 };

/// Runs one suite. `args` excludes the program name. Reports go to the
/// --out file or to `out`; messages go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace bandembed
