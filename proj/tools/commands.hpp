#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace imurep::cli {

/// Entry point shared by the executable and the tests. Returns the process
/// exit code; diagnostics go to `err` as a single line.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace imurep::cli
