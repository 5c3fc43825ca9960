#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ltsep {

/// Runs one command line (without the program name). Returns the process
/// exit code: 0 separable, 1 inseparable, 2 unknown, 3 error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ltsep
