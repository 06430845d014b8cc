#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace chainsparse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitExhausted = 3;

/// Runs one subcommand. `args` excludes the program name. Machine output
/// (JSON) goes to `out` or to the --report file, summaries go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace chainsparse::cli
