#pragma once

#include <stdexcept>
#include <string>

namespace rankopt {

// Raised when an input violates a model constraint (bad price, non-monotone
// tail, duplicate products, span out of range, ...).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised by the brute-force oracle when an instance exceeds its enumeration
// budget. The oracle never truncates silently.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed JSON or a config field of the wrong type.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rankopt
