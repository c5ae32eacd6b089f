#pragma once

#include <stdexcept>
#include <string>

namespace aiknn {

/// Raised when caller-supplied data or parameters violate a precondition.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when an internal correctness property fails (a bug, not bad input).
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace aiknn
