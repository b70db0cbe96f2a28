#ifndef ICCDEC_EISENSTEIN_HPP_
#define ICCDEC_EISENSTEIN_HPP_

#include <array>
#include <compare>
#include <cstddef>
#include <string>

#include <boost/container_hash/hash.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "iccdec/error.hpp"

namespace iccdec {

using BigInt = boost::multiprecision::cpp_int;

// a + b*w with w^2 = -1 - w (a primitive cube root of unity). Coefficients
// are arbitrary precision, so no arithmetic here can overflow.
class EisensteinInt {
 public:
  EisensteinInt() = default;
  EisensteinInt(BigInt a, BigInt b = 0) : a_(std::move(a)), b_(std::move(b)) {}
  EisensteinInt(long long a, long long b = 0) : a_(a), b_(b) {}
  EisensteinInt(int a) : a_(a), b_(0) {}

  static EisensteinInt omega() { return EisensteinInt(0, 1); }

  const BigInt& re() const { return a_; }
  const BigInt& om() const { return b_; }

  friend EisensteinInt operator+(const EisensteinInt& x, const EisensteinInt& y) {
    return {x.a_ + y.a_, x.b_ + y.b_};
  }
  friend EisensteinInt operator-(const EisensteinInt& x, const EisensteinInt& y) {
    return {x.a_ - y.a_, x.b_ - y.b_};
  }
  EisensteinInt operator-() const { return {-a_, -b_}; }
  friend EisensteinInt operator*(const EisensteinInt& x, const EisensteinInt& y) {
    // (a1 + b1 w)(a2 + b2 w) = a1a2 - b1b2 + (a1b2 + a2b1 - b1b2) w
    const BigInt bb = x.b_ * y.b_;
    return {x.a_ * y.a_ - bb, x.a_ * y.b_ + y.a_ * x.b_ - bb};
  }

  // N(a + bw) = a^2 - ab + b^2
  BigInt norm() const { return a_ * a_ - a_ * b_ + b_ * b_; }

  bool is_zero() const { return a_ == 0 && b_ == 0; }

  bool operator==(const EisensteinInt&) const = default;
  std::strong_ordering operator<=>(const EisensteinInt& o) const {
    if (a_ != o.a_) return a_ < o.a_ ? std::strong_ordering::less : std::strong_ordering::greater;
    if (b_ != o.b_) return b_ < o.b_ ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::size_t seed = 0;
    boost::hash_combine(seed, boost::hash<BigInt>{}(a_));
    boost::hash_combine(seed, boost::hash<BigInt>{}(b_));
    return seed;
  }

  // "3", "-w", "2-w", "1+2w"
  std::string to_string() const {
    if (b_ == 0) return a_.str();
    std::string out;
    if (a_ != 0) out = a_.str();
    const BigInt mag = b_ < 0 ? BigInt(-b_) : b_;
    if (b_ < 0) {
      out += "-";
    } else if (!out.empty()) {
      out += "+";
    }
    if (mag != 1) out += mag.str();
    out += "w";
    return out;
  }

 private:
  BigInt a_ = 0;
  BigInt b_ = 0;
};

// 2x2 matrix over the Eisenstein integers with determinant 1.
class Mat2E {
 public:
  Mat2E() : Mat2E(1, 0, 0, 1) {}
  Mat2E(EisensteinInt p, EisensteinInt q, EisensteinInt r, EisensteinInt s)
      : e_{std::move(p), std::move(q), std::move(r), std::move(s)} {
    if (!(det() == EisensteinInt(1))) {
      throw UsageError("Mat2E requires determinant 1, got " + det().to_string());
    }
  }

  static Mat2E identity() { return Mat2E(); }

  const EisensteinInt& operator()(int row, int col) const { return e_[2 * row + col]; }

  EisensteinInt det() const { return e_[0] * e_[3] - e_[1] * e_[2]; }
  EisensteinInt trace() const { return e_[0] + e_[3]; }

  friend Mat2E operator*(const Mat2E& x, const Mat2E& y) {
    return Mat2E(Unchecked{}, x.e_[0] * y.e_[0] + x.e_[1] * y.e_[2],
                 x.e_[0] * y.e_[1] + x.e_[1] * y.e_[3],
                 x.e_[2] * y.e_[0] + x.e_[3] * y.e_[2],
                 x.e_[2] * y.e_[1] + x.e_[3] * y.e_[3]);
  }

  // Adjugate; exact because det = 1.
  Mat2E inverse() const { return Mat2E(Unchecked{}, e_[3], -e_[1], -e_[2], e_[0]); }

  bool is_identity() const {
    return e_[0] == EisensteinInt(1) && e_[1].is_zero() && e_[2].is_zero() &&
           e_[3] == EisensteinInt(1);
  }

  bool operator==(const Mat2E&) const = default;
  std::strong_ordering operator<=>(const Mat2E& o) const {
    for (int i = 0; i < 4; ++i) {
      if (auto c = e_[i] <=> o.e_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::size_t seed = 0;
    for (const auto& x : e_) boost::hash_combine(seed, x.hash());
    return seed;
  }

  std::string to_string() const {
    return "[[" + e_[0].to_string() + "," + e_[1].to_string() + "],[" +
           e_[2].to_string() + "," + e_[3].to_string() + "]]";
  }

 private:
  struct Unchecked {};
  Mat2E(Unchecked, EisensteinInt p, EisensteinInt q, EisensteinInt r, EisensteinInt s)
      : e_{std::move(p), std::move(q), std::move(r), std::move(s)} {}

  std::array<EisensteinInt, 4> e_;
};

}  // namespace iccdec

#endif  // ICCDEC_EISENSTEIN_HPP_
