#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sspec::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,  ///< unexpected numerical failure, e.g. a solver that did not converge
  kExitUsage = 2,
  kExitValidation = 3,
  kExitIo = 4,
  kExitCheckFailed = 5,
};

/// Runs one invocation of the tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sspec::cli
