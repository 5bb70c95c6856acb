#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace at4ea {

/// Runs one CLI invocation (without the program name). Writes reports to
/// `out` and diagnostics to `err`. Returns the process exit code:
///   0  success
///   1  validation or analysis failure
///   2  parse or I/O failure (including usage errors)
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace at4ea
