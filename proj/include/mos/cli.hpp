#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mos::cli {

/// Runs one command line (args excludes the program name). Returns the exit
/// status: 0 success, 1 usage, 2 validation or parse failure (including a
/// failed residual gate), 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mos::cli
