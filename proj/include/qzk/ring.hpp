// Copyright 2026 The qzk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Exact scalar arithmetic for the whole library.
//
// Every amplitude, matrix entry, trace, and probability that the circuit
// machinery can produce lives in the field Q(sqrt2, i): gate entries are
// rational multiples of powers of 1/sqrt2, and conditional probabilities are
// ratios of such values. Three layers:
//
//   Rat  — rational number, 64-bit numerator/denominator, gcd-normalized,
//          128-bit intermediates, loud overflow.
//   Q2   — a + b*sqrt2 with rational a, b. A field (sqrt2 is irrational, so
//          a^2 - 2 b^2 = 0 forces a = b = 0).
//   CQ2  — re + i*im with Q2 components. The amplitude field.
//
// Equality is exact field equality; there is no epsilon anywhere in here.

#pragma once

#include <cstdint>
#include <string>

#include "qzk/error.hpp"

namespace qzk {

namespace detail {

using int128 = __int128;
using uint128 = unsigned __int128;

inline uint128 abs128(int128 v) {
  return v < 0 ? static_cast<uint128>(-(v + 1)) + 1 : static_cast<uint128>(v);
}

inline uint128 gcd128(uint128 a, uint128 b) {
  while (b != 0) {
    uint128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t narrow128(int128 v, const char* what) {
  if (v > static_cast<int128>(INT64_MAX) || v < static_cast<int128>(INT64_MIN))
    fail(ErrorKind::kOverflow, what);
  return static_cast<std::int64_t>(v);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Rat

class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit
  Rat(std::int64_t num, std::int64_t den) { *this = make(num, den); }

  static Rat make(detail::int128 num, detail::int128 den) {
    if (den == 0) fail(ErrorKind::kDomain, "rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) return Rat();
    detail::uint128 g = detail::gcd128(detail::abs128(num), detail::abs128(den));
    num /= static_cast<detail::int128>(g);
    den /= static_cast<detail::int128>(g);
    Rat r;
    r.num_ = detail::narrow128(num, "rational numerator out of range");
    r.den_ = detail::narrow128(den, "rational denominator out of range");
    return r;
  }

  // 2^e for any integer e (negative exponents give exact dyadic fractions).
  static Rat pow2(int e) {
    if (e < -62 || e > 62) fail(ErrorKind::kOverflow, "2^e out of range");
    std::int64_t p = std::int64_t{1} << (e < 0 ? -e : e);
    return e < 0 ? Rat(1, p) : Rat(p);
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }

  friend Rat operator+(const Rat& x, const Rat& y) {
    using detail::int128;
    return make(int128(x.num_) * y.den_ + int128(y.num_) * x.den_,
                int128(x.den_) * y.den_);
  }
  friend Rat operator-(const Rat& x, const Rat& y) {
    using detail::int128;
    return make(int128(x.num_) * y.den_ - int128(y.num_) * x.den_,
                int128(x.den_) * y.den_);
  }
  friend Rat operator*(const Rat& x, const Rat& y) {
    using detail::int128;
    return make(int128(x.num_) * y.num_, int128(x.den_) * y.den_);
  }
  friend Rat operator/(const Rat& x, const Rat& y) {
    if (y.is_zero()) fail(ErrorKind::kDomain, "rational division by zero");
    using detail::int128;
    return make(int128(x.num_) * y.den_, int128(x.den_) * y.num_);
  }
  Rat operator-() const {
    Rat r = *this;
    r.num_ = -r.num_;
    return r;
  }
  Rat& operator+=(const Rat& y) { return *this = *this + y; }
  Rat& operator-=(const Rat& y) { return *this = *this - y; }
  Rat& operator*=(const Rat& y) { return *this = *this * y; }
  Rat& operator/=(const Rat& y) { return *this = *this / y; }

  friend bool operator==(const Rat& x, const Rat& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }
  friend bool operator!=(const Rat& x, const Rat& y) { return !(x == y); }
  friend bool operator<(const Rat& x, const Rat& y) {
    using detail::int128;
    return int128(x.num_) * y.den_ < int128(y.num_) * x.den_;
  }
  friend bool operator<=(const Rat& x, const Rat& y) { return x < y || x == y; }
  friend bool operator>(const Rat& x, const Rat& y) { return y < x; }
  friend bool operator>=(const Rat& x, const Rat& y) { return y <= x; }

  double approx() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  std::int64_t num_;
  std::int64_t den_;
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

// ---------------------------------------------------------------------------
// Q2 = a + b*sqrt2

class Q2 {
 public:
  Q2() = default;
  Q2(std::int64_t value) : a_(value) {}  // NOLINT: implicit
  Q2(const Rat& a) : a_(a) {}            // NOLINT: implicit
  Q2(const Rat& a, const Rat& b) : a_(a), b_(b) {}

  static Q2 sqrt2() { return Q2(Rat(0), Rat(1)); }
  // sqrt2^e for any integer e; odd negative powers stay exact (1/sqrt2 =
  // sqrt2/2).
  static Q2 pow_sqrt2(int e) {
    bool odd = (e % 2) != 0;
    int half = (e - (odd ? 1 : 0)) / 2;  // e = 2*half (+1 if odd)
    Q2 r(Rat::pow2(half));
    if (odd) r = r * sqrt2();
    return r;
  }

  const Rat& rational_part() const { return a_; }
  const Rat& sqrt2_part() const { return b_; }
  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  bool is_rational() const { return b_.is_zero(); }

  friend Q2 operator+(const Q2& x, const Q2& y) {
    return Q2(x.a_ + y.a_, x.b_ + y.b_);
  }
  friend Q2 operator-(const Q2& x, const Q2& y) {
    return Q2(x.a_ - y.a_, x.b_ - y.b_);
  }
  friend Q2 operator*(const Q2& x, const Q2& y) {
    return Q2(x.a_ * y.a_ + Rat(2) * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_);
  }
  Q2 operator-() const { return Q2(-a_, -b_); }

  Q2 inverse() const {
    // 1/(a + b sqrt2) = (a - b sqrt2) / (a^2 - 2 b^2); the denominator only
    // vanishes for the zero element because sqrt2 is irrational.
    Rat d = a_ * a_ - Rat(2) * b_ * b_;
    if (d.is_zero()) fail(ErrorKind::kDomain, "Q2 division by zero");
    return Q2(a_ / d, -b_ / d);
  }
  friend Q2 operator/(const Q2& x, const Q2& y) { return x * y.inverse(); }

  Q2& operator+=(const Q2& y) { return *this = *this + y; }
  Q2& operator-=(const Q2& y) { return *this = *this - y; }
  Q2& operator*=(const Q2& y) { return *this = *this * y; }
  Q2& operator/=(const Q2& y) { return *this = *this / y; }

  friend bool operator==(const Q2& x, const Q2& y) {
    return x.a_ == y.a_ && x.b_ == y.b_;
  }
  friend bool operator!=(const Q2& x, const Q2& y) { return !(x == y); }

  // Order inherited from the real embedding. Used for probability bounds.
  friend bool operator<(const Q2& x, const Q2& y) {
    // x < y  iff  (a + b sqrt2) < 0 for the difference; decide sign of
    // a + b*sqrt2 exactly: compare a^2 vs 2 b^2 with the signs of a, b.
    Q2 d = x - y;
    return d.sign() < 0;
  }
  friend bool operator<=(const Q2& x, const Q2& y) { return x < y || x == y; }
  friend bool operator>(const Q2& x, const Q2& y) { return y < x; }
  friend bool operator>=(const Q2& x, const Q2& y) { return y <= x; }

  int sign() const {
    int sa = a_.sign(), sb = b_.sign();
    if (sb == 0) return sa;
    if (sa == 0) return sb;
    if (sa == sb) return sa;
    // Opposite signs: |a| vs |b| sqrt2, i.e. a^2 vs 2 b^2.
    Rat lhs = a_ * a_, rhs = Rat(2) * b_ * b_;
    if (lhs == rhs) fail(ErrorKind::kInternal, "sqrt2 matched a rational");
    return lhs > rhs ? sa : sb;
  }

  double approx() const {
    return a_.approx() + b_.approx() * 1.4142135623730950488;
  }

  std::string str() const {
    if (b_.is_zero()) return a_.str();
    std::string s;
    if (!a_.is_zero()) s = a_.str() + (b_.sign() > 0 ? "+" : "");
    if (b_ == Rat(1)) return s + "sqrt2";
    if (b_ == Rat(-1)) return s + "-sqrt2";
    return s + b_.str() + "*sqrt2";
  }

 private:
  Rat a_;
  Rat b_;
};

// ---------------------------------------------------------------------------
// CQ2 = re + i*im

class CQ2 {
 public:
  CQ2() = default;
  CQ2(std::int64_t value) : re_(value) {}  // NOLINT: implicit
  CQ2(const Rat& re) : re_(re) {}          // NOLINT: implicit
  CQ2(const Q2& re) : re_(re) {}           // NOLINT: implicit
  CQ2(const Q2& re, const Q2& im) : re_(re), im_(im) {}

  static CQ2 i() { return CQ2(Q2(0), Q2(1)); }
  // i^e for any integer e: the phase group {1, i, -1, -i}.
  static CQ2 i_pow(int e) {
    switch (((e % 4) + 4) % 4) {
      case 0: return CQ2(1);
      case 1: return i();
      case 2: return CQ2(-1);
      default: return CQ2(Q2(0), Q2(-1));
    }
  }

  const Q2& re() const { return re_; }
  const Q2& im() const { return im_; }
  bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
  bool is_real() const { return im_.is_zero(); }

  CQ2 conj() const { return CQ2(re_, -im_); }
  Q2 abs2() const { return re_ * re_ + im_ * im_; }

  friend CQ2 operator+(const CQ2& x, const CQ2& y) {
    return CQ2(x.re_ + y.re_, x.im_ + y.im_);
  }
  friend CQ2 operator-(const CQ2& x, const CQ2& y) {
    return CQ2(x.re_ - y.re_, x.im_ - y.im_);
  }
  friend CQ2 operator*(const CQ2& x, const CQ2& y) {
    return CQ2(x.re_ * y.re_ - x.im_ * y.im_, x.re_ * y.im_ + x.im_ * y.re_);
  }
  CQ2 operator-() const { return CQ2(-re_, -im_); }

  CQ2 inverse() const {
    Q2 d = abs2();
    if (d.is_zero()) fail(ErrorKind::kDomain, "CQ2 division by zero");
    Q2 inv = d.inverse();
    return CQ2(re_ * inv, -im_ * inv);
  }
  friend CQ2 operator/(const CQ2& x, const CQ2& y) { return x * y.inverse(); }

  CQ2& operator+=(const CQ2& y) { return *this = *this + y; }
  CQ2& operator-=(const CQ2& y) { return *this = *this - y; }
  CQ2& operator*=(const CQ2& y) { return *this = *this * y; }
  CQ2& operator/=(const CQ2& y) { return *this = *this / y; }

  friend bool operator==(const CQ2& x, const CQ2& y) {
    return x.re_ == y.re_ && x.im_ == y.im_;
  }
  friend bool operator!=(const CQ2& x, const CQ2& y) { return !(x == y); }

  double approx_re() const { return re_.approx(); }
  double approx_im() const { return im_.approx(); }

  std::string str() const {
    if (im_.is_zero()) return re_.str();
    std::string s = re_.is_zero() ? "" : "(" + re_.str() + ")+";
    return s + "(" + im_.str() + ")i";
  }

 private:
  Q2 re_;
  Q2 im_;
};

// Common constants.
inline const Q2& q2_half() {
  static const Q2 v(Rat(1, 2));
  return v;
}
inline const Q2& q2_inv_sqrt2() {
  static const Q2 v(Rat(0), Rat(1, 2));  // sqrt2 / 2
  return v;
}

}  // namespace qzk
