#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace magnonet {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitConfigError = 2,
  kExitUnstable = 3,  // no stable point to report
  kExitIoError = 4,
};

/// Entry point of the `magnonet` tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace magnonet
