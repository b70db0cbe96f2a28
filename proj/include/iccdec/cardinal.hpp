#ifndef ICCDEC_CARDINAL_HPP_
#define ICCDEC_CARDINAL_HPP_

#include <cstdint>
#include <string>

namespace iccdec {

// Order of a group: a finite count, countably infinite, or not determined
// by the available data.
class Cardinal {
 public:
  enum class Kind { Finite, Infinite, Unknown };

  static Cardinal finite(std::uint64_t n) { return Cardinal(Kind::Finite, n); }
  static Cardinal infinite() { return Cardinal(Kind::Infinite, 0); }
  static Cardinal unknown() { return Cardinal(Kind::Unknown, 0); }

  Kind kind() const { return kind_; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  bool is_infinite() const { return kind_ == Kind::Infinite; }
  bool is_unknown() const { return kind_ == Kind::Unknown; }
  std::uint64_t value() const { return value_; }

  bool operator==(const Cardinal&) const = default;

  std::string to_string() const {
    switch (kind_) {
      case Kind::Finite:
        return std::to_string(value_);
      case Kind::Infinite:
        return "infinite";
      case Kind::Unknown:
        break;
    }
    return "unknown";
  }

 private:
  Cardinal(Kind k, std::uint64_t v) : kind_(k), value_(v) {}
  Kind kind_;
  std::uint64_t value_;
};

}  // namespace iccdec

#endif  // ICCDEC_CARDINAL_HPP_
