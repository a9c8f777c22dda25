#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace qarena::cli {

/// Runs the command line `args` (without the program name). Exit codes:
/// 0 success, 1 domain error, 2 usage error.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace qarena::cli
