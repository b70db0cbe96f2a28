#ifndef ICCDEC_CHECKED_INT_HPP_
#define ICCDEC_CHECKED_INT_HPP_

#include <cstdint>
#include <cstdlib>
#include <numeric>

#include "iccdec/error.hpp"

namespace iccdec::checked {

inline std::int64_t add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) {
    throw ArithmeticError("int64 overflow in addition");
  }
  return r;
}

inline std::int64_t sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) {
    throw ArithmeticError("int64 overflow in subtraction");
  }
  return r;
}

inline std::int64_t mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw ArithmeticError("int64 overflow in multiplication");
  }
  return r;
}

inline std::int64_t neg(std::int64_t a) { return sub(0, a); }

inline std::int64_t abs(std::int64_t a) { return a < 0 ? neg(a) : a; }

// Floor division and the matching non-negative remainder (b > 0).
inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline std::int64_t mod(std::int64_t a, std::int64_t b) {
  std::int64_t r = a % b;
  return r < 0 ? r + b : r;
}

}  // namespace iccdec::checked

#endif  // ICCDEC_CHECKED_INT_HPP_
