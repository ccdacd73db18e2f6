#pragma once

#include <string>
#include <vector>

namespace fisher::cli {

// Exit codes: 0 ok, 1 verdict or assertion violation, 2 usage error.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);  // args exclude the program name

}  // namespace fisher::cli
