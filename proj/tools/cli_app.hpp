#pragma once

#include <string>
#include <vector>

namespace walshlp::cli {

// Entry point shared by the executable and the tests.  Exit codes: 0 on
// success (including --help), 1 when a verification fails or an internal
// error occurs, 2 on usage errors.
int run(int argc, const char* const argv[]);

// Convenience overload: `args` excludes the program name.
int run(const std::vector<std::string>& args);

}  // namespace walshlp::cli
