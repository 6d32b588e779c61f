#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace amr::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kDataError = 2;
inline constexpr int kModelError = 3;

// Runs one command. `args` excludes the program name.
int Run(const std::vector<std::string> &args, std::ostream &out,
        std::ostream &err);

}  // namespace amr::cli
