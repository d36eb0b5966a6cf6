#pragma once

#include <stdexcept>
#include <string>

namespace nbview {

// Invalid construction or configuration argument (non-finite, out of range).
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Two particles whose squared separation plus softening squared is exactly
// zero. Raised before any state is modified.
class SingularConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nbview
