#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "ccm/errors.hpp"

namespace ccm {

using i64 = long long;
using i128 = __int128;

namespace intops {

inline i64 add(i64 a, i64 b) {
  i64 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("int64 overflow in add");
  return r;
}

inline i64 sub(i64 a, i64 b) {
  i64 r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("int64 overflow in sub");
  return r;
}

inline i64 mul(i64 a, i64 b) {
  i64 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("int64 overflow in mul");
  return r;
}

inline i64 neg(i64 a) {
  if (a == std::numeric_limits<i64>::min()) throw OverflowError("int64 overflow in neg");
  return -a;
}

// floor division, denominator > 0
inline i64 fdiv(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace intops

// Exact rational number. Canonical form: gcd(|num|, den) = 1, den > 0.
// All arithmetic is overflow-checked and throws OverflowError rather than wrapping.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(i64 n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(i64 n, i64 d) : num_(n), den_(d) { normalize(); }

  i64 num() const { return num_; }
  i64 den() const { return den_; }

  bool is_zero() const { return num_ == 0; }

  Rational operator-() const { return Rational(intops::neg(num_), den_); }

  friend Rational operator+(const Rational& a, const Rational& b) {
    i64 g = std::gcd(a.den_, b.den_);
    i64 bd = b.den_ / g;
    i64 n = intops::add(intops::mul(a.num_, bd), intops::mul(b.num_, a.den_ / g));
    i64 d = intops::mul(a.den_, bd);
    return Rational(n, d);
  }

  friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

  friend Rational operator*(const Rational& a, const Rational& b) {
    i64 g1 = std::gcd(std::abs(a.num_), b.den_);
    i64 g2 = std::gcd(std::abs(b.num_), a.den_);
    i64 n = intops::mul(a.num_ / g1, b.num_ / g2);
    i64 d = intops::mul(a.den_ / g2, b.den_ / g1);
    return Rational(n, d);
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error("rational division by zero");
    return a * Rational(b.den_, b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    i128 lhs = i128(a.num_) * b.den_;
    i128 rhs = i128(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  // Fixed "p/q" form, q always printed (so "3" serializes as "3/1").
  std::string str() const {
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  void normalize() {
    if (den_ == 0) throw Error("rational with zero denominator");
    if (den_ < 0) {
      num_ = intops::neg(num_);
      den_ = intops::neg(den_);
    }
    i64 g = std::gcd(std::abs(num_), den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  i64 num_;
  i64 den_;
};

inline Rational abs(const Rational& r) { return r.num() < 0 ? -r : r; }

// Extended index: a positive integer or Infinite. reciprocal(Infinite) = 0.
class ExtendedIndex {
 public:
  ExtendedIndex() : finite_(false), value_(0) {}
  static ExtendedIndex infinite() { return ExtendedIndex(); }
  static ExtendedIndex of(i64 v) {
    if (v <= 0) throw Error("index must be positive");
    ExtendedIndex e;
    e.finite_ = true;
    e.value_ = v;
    return e;
  }

  bool is_finite() const { return finite_; }
  i64 value() const {
    if (!finite_) throw Error("infinite index has no integer value");
    return value_;
  }

  Rational reciprocal() const { return finite_ ? Rational(1, value_) : Rational(0); }

  friend bool operator==(const ExtendedIndex& a, const ExtendedIndex& b) {
    return a.finite_ == b.finite_ && a.value_ == b.value_;
  }

  std::string str() const { return finite_ ? std::to_string(value_) : std::string("inf"); }

 private:
  bool finite_;
  i64 value_;
};

}  // namespace ccm
