#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace divchain {

// Runs one subcommand. args excludes the program name. Exit codes: 0 success, 1 domain error or
// bad usage, 2 verification failure, 3 resource error.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace divchain
