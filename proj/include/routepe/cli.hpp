#pragma once

#include <string>
#include <vector>

namespace routepe::cli {

// Entry point shared by the binary and the tests; `args` excludes argv[0].
// Returns the process exit code. Errors print one machine-parseable line,
// "error: <kind>: <message>", and map to distinct codes:
//   2 config, 3 io, 4 schema, 5 structure, 6 numeric, 7 infeasible, 1 other.
int run(const std::vector<std::string>& args);

}  // namespace routepe::cli
