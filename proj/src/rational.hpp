#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace laxquad {

// Raised when exact arithmetic would leave the int64 range.  Callers that
// use rationals as a fast path (normalize_rational and friends) catch this
// and fall back to sampling.
struct ExactOverflow : std::runtime_error {
  ExactOverflow() : std::runtime_error("exact rational arithmetic overflow") {}
};

// Exact rational with canonical form: den > 0, gcd(|num|, den) = 1.
class Rational {
 public:
  Rational() = default;
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  bool is_integer() const { return den_ == 1; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(checked(i128(a.num_) * b.den_ + i128(b.num_) * a.den_),
                    checked(i128(a.den_) * b.den_), already_checked{});
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(checked(i128(a.num_) * b.den_ - i128(b.num_) * a.den_),
                    checked(i128(a.den_) * b.den_), already_checked{});
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(checked(i128(a.num_) * b.num_),
                    checked(i128(a.den_) * b.den_), already_checked{});
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return Rational(checked(i128(a.num_) * b.den_),
                    checked(i128(a.den_) * b.num_), already_checked{});
  }
  Rational operator-() const { return Rational(-num_, den_, already_checked{}); }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }

  // r^k for integer k; k < 0 requires a nonzero base.
  Rational pow_int(long long k) const {
    Rational base = *this;
    if (k < 0) {
      if (num_ == 0) throw std::domain_error("0 raised to negative power");
      base = Rational(den_, num_);
      k = -k;
    }
    Rational out(1);
    while (k > 0) {
      if (k & 1) out *= base;
      base = (k > 1) ? base * base : base;
      k >>= 1;
    }
    return out;
  }

  // Exact conversion of a finite double (every finite double is dyadic).
  // Throws ExactOverflow when the dyadic form does not fit in int64.
  static Rational from_double_exact(double v);

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

 private:
  using i128 = __int128;
  struct already_checked {};

  Rational(long long n, long long d, already_checked) : num_(n), den_(d) {
    reduce();
  }
  Rational(i128 n, i128 d, already_checked) : num_(checked(n)), den_(checked(d)) {
    reduce();
  }

  static long long checked(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw ExactOverflow();
    return static_cast<long long>(v);
  }

  void reduce() {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    if (den_ < 0) {
      if (num_ == INT64_MIN || den_ == INT64_MIN) throw ExactOverflow();
      num_ = -num_;
      den_ = -den_;
    }
    long long g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  void normalize() { reduce(); }

  long long num_ = 0;
  long long den_ = 1;
};

inline Rational Rational::from_double_exact(double v) {
  if (v != v || v == 1.0 / 0.0 || v == -1.0 / 0.0)
    throw std::domain_error("non-finite value has no rational form");
  if (v == 0.0) return Rational(0);
  // Scale by powers of two until integral.
  double scaled = v;
  long long den = 1;
  int iter = 0;
  while (scaled != static_cast<double>(static_cast<long long>(scaled))) {
    if (den > (INT64_MAX >> 1) || iter++ > 70) throw ExactOverflow();
    scaled *= 2.0;
    den <<= 1;
    if (scaled > 9.0e18 || scaled < -9.0e18) throw ExactOverflow();
  }
  return Rational(static_cast<long long>(scaled), den);
}

}  // namespace laxquad
