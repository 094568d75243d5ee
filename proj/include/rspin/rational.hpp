#pragma once

// Exact rational numbers. Thin value wrapper over boost::multiprecision so the
// rest of the library never sees the backend type directly.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rspin {

using BigInt = boost::multiprecision::cpp_int;

class Rational {
 public:
  Rational() = default;
  Rational(std::int64_t n) : value_(n) {}  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    value_ = den < 0 ? boost::multiprecision::cpp_rational(-num, -den)
                     : boost::multiprecision::cpp_rational(num, den);
  }

  BigInt numerator() const { return boost::multiprecision::numerator(value_); }
  BigInt denominator() const { return boost::multiprecision::denominator(value_); }

  bool is_zero() const { return value_ == 0; }
  int sign() const { return value_.sign(); }

  Rational operator-() const { return Rational(-value_); }
  Rational inverse() const {
    if (is_zero()) throw std::domain_error("inverse of zero");
    return Rational(1 / value_);
  }

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    value_ /= o.value_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (b.value_ < a.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  // Serialized form "<num>/<den>", denominator always present.
  std::string str() const { return numerator().str() + "/" + denominator().str(); }

  // Human form: "1/8", "0", "-3".
  std::string pretty() const {
    if (denominator() == 1) return numerator().str();
    return str();
  }

  // Accepts "<num>/<den>" or a bare integer. Non-reduced input is reduced.
  static Rational parse(std::string_view text) {
    auto bad = [&] { return std::invalid_argument("malformed rational '" + std::string(text) + "'"); };
    auto check_int = [&](std::string_view s, bool allow_sign) {
      if (s.empty()) throw bad();
      std::size_t i = 0;
      if (allow_sign && (s[0] == '-' || s[0] == '+')) i = 1;
      if (i == s.size()) throw bad();
      for (; i < s.size(); ++i)
        if (s[i] < '0' || s[i] > '9') throw bad();
    };
    auto slash = text.find('/');
    std::string_view num = text.substr(0, slash);
    check_int(num, true);
    BigInt n(std::string(num[0] == '+' ? num.substr(1) : num));
    BigInt d = 1;
    if (slash != std::string_view::npos) {
      std::string_view den = text.substr(slash + 1);
      check_int(den, false);
      d = BigInt(std::string(den));
      if (d == 0) throw bad();
    }
    return Rational(n, d);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& q) { return os << q.pretty(); }

 private:
  explicit Rational(boost::multiprecision::cpp_rational v) : value_(std::move(v)) {}

  boost::multiprecision::cpp_rational value_{0};
};

inline Rational factorial(int n) {
  BigInt f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return Rational(f, 1);
}

inline Rational power(const Rational& base, int exp) {
  Rational out(1);
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace rspin
