#pragma once

#include <string>
#include <vector>

namespace lvsg::cli {

/// Runs the command line; returns the process exit code (0 ok, 2 invalid
/// input or usage, 3 numerical non-convergence, 1 anything else).
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

} // namespace lvsg::cli
