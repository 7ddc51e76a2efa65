#pragma once

#include <string>
#include <utility>
#include <vector>

namespace ramified::cli {

/// Runs the command line; returns the process exit code: 0 ok, 1 parse
/// error, 2 validation error, 3 size limit exceeded.
int run(int argc, const char* const* argv);

/// Sweep points for "lo:hi:steps": steps evenly spaced values from lo to hi
/// inclusive (lo alone for one step, none for zero).
std::vector<double> parse_grid(const std::string& text);

}  // namespace ramified::cli
