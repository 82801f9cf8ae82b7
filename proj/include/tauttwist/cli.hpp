#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tauttwist {

// Runs one CLI invocation; args excludes the program name. Exit codes:
// 0 = success and all asserted checks passed, 1 = a verification failed or
// a computation error occurred, 2 = invalid arguments.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace tauttwist
