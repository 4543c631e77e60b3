#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace budding::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// Runs the command line `args` (without the program name). Diagnostics go to
// `err`, short summaries to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace budding::cli
