#pragma once

#include <ostream>

namespace tokstat::cli {

enum ExitCode : int {
  kOk = 0,
  kParseError = 1,  // malformed input, invalid arguments, undefined metrics
  kIoError = 2,
  kNetworkError = 3,
};

// Entry point of the `tokstat` tool. Reports go to `out` (or --output),
// diagnostics to `err`; returns one of ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace tokstat::cli
