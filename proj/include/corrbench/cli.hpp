#pragma once

#include <string>
#include <vector>

namespace corrbench {

// Full command dispatch. Returns the process exit code: 0 all checks passed,
// 1 at least one violation (reproduction data emitted), 2 inconclusive
// statistics, 3 usage or input error.
int run_cli(std::vector<std::string> args);

}  // namespace corrbench
