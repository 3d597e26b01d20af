#pragma once

#include <ostream>

namespace cxnprobe::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitData = 2,
  kExitInternal = 3,
};

// Entry point shared by the executable and the CLI tests. Diagnostics go to
// `err` as one JSON object per failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cxnprobe::cli
