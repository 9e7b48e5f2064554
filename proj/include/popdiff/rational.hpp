#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "popdiff/errors.hpp"

namespace popdiff {

using BigInt = boost::multiprecision::cpp_int;

inline BigInt pow_big(BigInt base, std::uint64_t exp) {
  BigInt result = 1;
  while (exp) {
    if (exp & 1) result *= base;
    exp >>= 1;
    if (exp) base *= base;
  }
  return result;
}

inline BigInt pow2_big(std::uint64_t exp) {
  BigInt result = 1;
  result <<= exp;
  return result;
}

// ceil(a / b) for a >= 0, b > 0.
inline BigInt ceil_div(const BigInt& a, const BigInt& b) { return (a + b - 1) / b; }

// Exact non-negative rational, always stored in lowest terms.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ <= 0) throw ParameterError("rational denominator must be positive");
    if (num_ < 0) throw ParameterError("rational must be non-negative");
    normalize();
  }
  explicit Rational(std::uint64_t value) : num_(value), den_(1) {}

  // Accepts "p/q" or "p" with decimal digits only; anything float-like is rejected.
  static Rational parse(std::string_view text) {
    auto digits = [&](std::string_view part) {
      if (part.empty() || part.size() > 4096) throw FormatError("bad rational '" + std::string(text) + "'");
      for (char ch : part)
        if (ch < '0' || ch > '9') throw FormatError("bad rational '" + std::string(text) + "' (use p/q)");
      return BigInt(std::string(part));
    };
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(digits(text), 1);
    BigInt den = digits(text.substr(slash + 1));
    if (den == 0) throw FormatError("zero denominator in '" + std::string(text) + "'");
    return Rational(digits(text.substr(0, slash)), std::move(den));
  }

  const BigInt& num() const noexcept { return num_; }
  const BigInt& den() const noexcept { return den_; }

  bool is_zero() const { return num_ == 0; }

  std::string to_string() const {
    if (den_ == 1) return num_.str();
    return num_.str() + "/" + den_.str();
  }

  // Returns a when the value is exactly 2^-a (a >= 0).
  std::optional<std::uint64_t> dyadic_reciprocal_exponent() const {
    if (num_ != 1) return std::nullopt;
    if ((den_ & (den_ - 1)) != 0) return std::nullopt;
    return static_cast<std::uint64_t>(boost::multiprecision::msb(den_));
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const BigInt lhs = a.num_ * b.den_;
    const BigInt rhs = b.num_ * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
  }

 private:
  void normalize() {
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    BigInt g = boost::multiprecision::gcd(num_, den_);
    num_ /= g;
    den_ /= g;
  }

  BigInt num_;
  BigInt den_;
};

// Name used where a value plays the role of the c or sigma parameter.
using RationalParam = Rational;

}  // namespace popdiff
