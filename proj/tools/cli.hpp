#pragma once

#include <iosfwd>

namespace agler::cli {

/// Exit codes of the `agler` tool.
enum Exit : int {
    kOk = 0,
    kMalformed = 1,
    kSingular = 2,
    kStageFailed = 3,
    kCheckFailed = 4,
};

/// Entry point shared by the binary and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace agler::cli
