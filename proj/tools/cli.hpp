#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace sumlab::cli {

enum ExitCode : int {
  kOk = 0,
  kExactCheckFailed = 1,
  kUsage = 2,
  kGuardExceeded = 3,
};

/// Runs one invocation; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Same, with the arguments after the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sumlab::cli
