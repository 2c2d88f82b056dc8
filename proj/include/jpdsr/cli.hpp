#pragma once

#include <ostream>

namespace jpdsr {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitIo = 3,
  kExitPipeline = 4,
};

/// Entry point of `jpdsr simulate | reconstruct | spectrum`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace jpdsr
