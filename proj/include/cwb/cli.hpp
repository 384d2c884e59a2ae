#pragma once

#include <string>
#include <vector>

namespace cwb::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;     // parse, precondition or usage error
inline constexpr int kExitNegative = 3;  // NotFound / Unsatisfiable
inline constexpr int kExitResource = 4;  // budget exceeded, overflow, Inconclusive

inline constexpr unsigned long long kDefaultSeed = 20240;

struct CommandResult {
  std::string out;
  std::string err;
  int exit_code = kExitOk;
};

// Runs one invocation; args exclude the program name. Never throws.
CommandResult run_command(const std::vector<std::string>& args);

}  // namespace cwb::cli
