#pragma once

#include <string>
#include <vector>

namespace lingsel {

// Launches `command` under /bin/sh, feeds one line per input entry on its
// standard input, and collects standard output lines. Throws Error on
// non-zero exit or timeout.
std::vector<std::string> run_line_filter(
    const std::string &command, const std::vector<std::string> &input,
    double timeout_seconds = 300.0);

// Runs a command with no input; returns captured stdout lines.
std::vector<std::string> run_command(const std::string &command,
                                     double timeout_seconds = 300.0);

}  // namespace lingsel
