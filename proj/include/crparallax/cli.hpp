#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crparallax::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitFailed = 1,
    kExitInadmissible = 2,
    kExitParse = 3,
    kExitOrder = 4,
    kExitExactMode = 5,
};

/// Runs one command line. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace crparallax::cli
