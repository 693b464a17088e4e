#pragma once

#include <ostream>

namespace gausscap::cli {

enum ExitCode : int { kOk = 0, kValidationFailed = 1, kUsage = 2, kIo = 3 };

/// Entry point of the `gausscap` tool with injectable streams.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gausscap::cli
