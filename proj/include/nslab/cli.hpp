#pragma once

#include <string>
#include <vector>

namespace nslab {

/// Entry point shared by the binary and the CLI tests. Exit codes: 0 all
/// gates passed, 1 a gate failed, 2 configuration error.
int run_cli(const std::vector<std::string>& args);

}  // namespace nslab
