#pragma once

#include <ostream>

namespace uwdepth::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitIo = 2,
  kExitEmpty = 3,
  kExitBadFlags = 4,
};

/// Parses argv and runs one of: fit, predict, eval, synth, bench.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace uwdepth::cli
