#pragma once

// Command-line front end: simulate | train | detect | evaluate | model | plot-data.
// Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <string>
#include <vector>

namespace actdis::cli {

inline constexpr const char* kToolVersion = "0.1.0";

int run(int argc, char** argv);
/// Same as run() with argv[0] supplied.
int run(const std::vector<std::string>& args);

}  // namespace actdis::cli
