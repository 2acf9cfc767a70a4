#pragma once

#include <iosfwd>

namespace ludemic::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kInternalError = 3 };

/// Entry point behind the `ludemic` executable.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ludemic::cli
