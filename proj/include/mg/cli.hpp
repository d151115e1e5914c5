#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInternal = 2;

/// Entry point of the `mgsynth` command. `args` excludes the program name.
/// Returns 0 on success, 1 on usage or input errors, 2 on internal errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mg
