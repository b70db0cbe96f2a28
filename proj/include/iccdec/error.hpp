#ifndef ICCDEC_ERROR_HPP_
#define ICCDEC_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace iccdec {

// Precondition or input-contract violation by the caller.
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

// Raised instead of silently wrapping when bounded integer arithmetic
// overflows.
class ArithmeticError : public std::overflow_error {
 public:
  explicit ArithmeticError(const std::string& what)
      : std::overflow_error(what) {}
};

// The requested operation is well defined but has no implementation for the
// given construction (e.g. closed hyperbolic surface groups).
class UnsupportedError : public std::runtime_error {
 public:
  explicit UnsupportedError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace iccdec

#endif  // ICCDEC_ERROR_HPP_
