#pragma once
#include <string>
#include <vector>

namespace sscool::cli {

// Exit codes: 0 success, 2 config error, 3 integration failure, 4 sweep failure quorum.
int run(const std::vector<std::string>& args);

inline constexpr const char* version_string = "sscool 1.0.0";

}  // namespace sscool::cli
