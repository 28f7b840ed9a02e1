#pragma once

#include <string>
#include <vector>

namespace wrinkle {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitData = 2, kExitIo = 3 };

// Entry point of the `wrinkle` tool; args exclude the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace wrinkle
