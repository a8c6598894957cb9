#pragma once
#include <stdexcept>
#include <string>

namespace sscool {

// Violated precondition / invalid argument: caller bug.
struct contract_error : std::invalid_argument {
  explicit contract_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// Runtime numerical failure carrying context (last good time, iteration count, ...).
struct diagnostic_error : std::runtime_error {
  explicit diagnostic_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace sscool
