#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace norden {

/// Entry point of the nordenlab tool. `args` excludes the program name.
/// Exit codes: 0 success, 1 a check failed, 2 input or usage error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace norden
