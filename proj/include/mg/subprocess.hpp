#pragma once

#include <string>

namespace mg {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  bool signaled = false;
  std::string out;
  std::string err;
  double seconds = 0.0;
};

/// Runs `command` through /bin/sh in its own process group. At the deadline
/// the group gets SIGTERM, and SIGKILL after `grace_seconds` more.
ProcessResult run_process(const std::string& command, double timeout_seconds, double grace_seconds = 2.0);

/// Single-quotes `s` for /bin/sh.
std::string shell_quote(const std::string& s);

}  // namespace mg
