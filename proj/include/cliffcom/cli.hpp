#pragma once

#include <string>
#include <vector>

namespace cliffcom::cli {

// Runs one CLI invocation. Deterministic output for fixed (args, seed).
// Exit status: 0 on success, 1 on domain errors, 2 on usage errors.
int run(const std::vector<std::string> &args);

}  // namespace cliffcom::cli
