#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fcagenda::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitPartial = 3;
inline constexpr int kExitResourceCap = 4;

// args excludes the program name. Subcommands: train, predict, explain, eval.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fcagenda::cli
