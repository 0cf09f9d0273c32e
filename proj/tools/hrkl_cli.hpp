#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hrkl::cli {

/// Runs the command line `args` (args[0] is the program name) and returns the
/// process exit status: 0 success, 2 usage, 3 validation, 4 numeric failure,
/// 5 I/O.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hrkl::cli
