#pragma once

#include <string>
#include <vector>

namespace ruler {

// Full command-line surface: `augment`, `verify`, `stats`, `list-rules`.
// args[0] is the program name. Returns the process exit code: 0 success,
// 1 verification failure, 2 I/O, parse, or usage error.
int run_cli(const std::vector<std::string>& args);

}  // namespace ruler
