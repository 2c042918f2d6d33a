#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <ostream>
#include <string>
#include <string_view>
#include <utility>

#include "cfgalg/errors.hpp"

namespace cfgalg {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number, always kept in canonical form: den > 0 and
/// gcd(|num|, den) = 1. Canonical form makes equality structural, so the
/// defaulted operator== is the field equality.
///
/// Inversion comes in two flavours. strict_inv() is the plain field inverse
/// and refuses zero. meadow_inv() is the zero-totalized inverse: it maps 0
/// to 0 and agrees with strict_inv() everywhere else, preserving the
/// restricted inverse law (x^-1 * x) * x = x for every x.
class Rational {
public:
  Rational() : num_(0), den_(1) {}
  Rational(long long n) : num_(n), den_(1) {}
  Rational(BigInt n) : num_(std::move(n)), den_(1) {}
  Rational(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  /// Parses "p", "-p" or "p/q". Anything else is a FormatError.
  static Rational parse(std::string_view text);

  const BigInt& num() const noexcept { return num_; }
  const BigInt& den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_ == 0; }
  bool is_one() const noexcept { return num_ == 1 && den_ == 1; }
  bool is_integer() const noexcept { return den_ == 1; }

  Rational strict_inv() const {
    if (is_zero())
      throw DivisionByZero();
    return Rational(den_, num_);
  }

  Rational meadow_inv() const {
    if (is_zero())
      return Rational();
    return Rational(den_, num_);
  }

  /// Canonical text form, always "num/den".
  std::string str() const { return num_.str() + "/" + den_.str(); }

  friend Rational operator+(const Rational& x, const Rational& y) {
    return Rational(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
  }
  friend Rational operator-(const Rational& x, const Rational& y) {
    return Rational(x.num_ * y.den_ - y.num_ * x.den_, x.den_ * y.den_);
  }
  friend Rational operator*(const Rational& x, const Rational& y) {
    return Rational(x.num_ * y.num_, x.den_ * y.den_);
  }
  /// Strict field division; division by zero is an error here.
  friend Rational operator/(const Rational& x, const Rational& y) {
    if (y.is_zero())
      throw DivisionByZero();
    return Rational(x.num_ * y.den_, x.den_ * y.num_);
  }
  friend Rational operator-(const Rational& x) { return Rational(-x.num_, x.den_); }

  Rational& operator+=(const Rational& y) { return *this = *this + y; }
  Rational& operator-=(const Rational& y) { return *this = *this - y; }
  Rational& operator*=(const Rational& y) { return *this = *this * y; }

  friend bool operator==(const Rational& x, const Rational& y) = default;

  friend bool operator<(const Rational& x, const Rational& y) {
    return x.num_ * y.den_ < y.num_ * x.den_;
  }
  friend bool operator>(const Rational& x, const Rational& y) { return y < x; }
  friend bool operator<=(const Rational& x, const Rational& y) { return !(y < x); }
  friend bool operator>=(const Rational& x, const Rational& y) { return !(x < y); }

  friend std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.str(); }

private:
  void normalize() {
    if (den_ == 0)
      throw DivisionByZero("rational with zero denominator");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    BigInt g = boost::multiprecision::gcd(num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
  }

  BigInt num_;
  BigInt den_;
};

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty())
    return false;
  for (char c : s)
    if (c < '0' || c > '9')
      return false;
  return true;
}

inline bool parse_integer_text(std::string_view s, BigInt& out) {
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s))
    return false;
  out = BigInt(std::string(s));
  if (neg)
    out = -out;
  return true;
}

} // namespace detail

inline Rational Rational::parse(std::string_view text) {
  const auto slash = text.find('/');
  BigInt num;
  if (slash == std::string_view::npos) {
    if (!detail::parse_integer_text(text, num))
      throw FormatError("invalid rational literal '" + std::string(text) + "'");
    return Rational(std::move(num));
  }
  BigInt den;
  if (!detail::parse_integer_text(text.substr(0, slash), num) ||
      !detail::parse_integer_text(text.substr(slash + 1), den))
    throw FormatError("invalid rational literal '" + std::string(text) + "'");
  if (den == 0)
    throw FormatError("invalid rational literal '" + std::string(text) + "': zero denominator");
  return Rational(std::move(num), std::move(den));
}

} // namespace cfgalg
