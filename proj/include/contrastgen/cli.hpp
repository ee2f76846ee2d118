#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace contrastgen {

inline constexpr const char* kVersion = "0.3.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitInputError = 1,
  kExitVerificationFailed = 2,
};

// Entry point behind the contrastgen binary. `args` excludes the program name.
// Regular output goes to `out`; diagnostics and logs go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace contrastgen
