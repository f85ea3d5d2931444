#pragma once

#include <stdexcept>

namespace d2means {

// Refusal: the requested computation exceeds a configured budget or a hard
// cap. The CLI maps this to exit code 2.
struct budget_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input file. The CLI maps this to exit code 65. Usage errors
// (bad arguments) are plain std::invalid_argument and map to 64.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace d2means
