#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rational.hpp"

namespace laxquad {

// Sign-magnitude arbitrary-precision integer, base 2^32.  Only what the
// polynomial layer needs: add/sub/mul, exact division, gcd, comparisons.
class BigInt {
 public:
  BigInt() = default;
  BigInt(long long v) {  // NOLINT
    if (v < 0) {
      neg_ = true;
      //避 overflow on LLONG_MIN
      unsigned long long m = ~static_cast<unsigned long long>(v) + 1ULL;
      push_u64(m);
    } else {
      push_u64(static_cast<unsigned long long>(v));
    }
  }

  bool is_zero() const { return limbs_.empty(); }
  bool negative() const { return neg_; }

  friend bool operator==(const BigInt& a, const BigInt& b) {
    return a.neg_ == b.neg_ && a.limbs_ == b.limbs_;
  }
  friend bool operator!=(const BigInt& a, const BigInt& b) { return !(a == b); }

  static int cmp_mag(const BigInt& a, const BigInt& b) {
    if (a.limbs_.size() != b.limbs_.size())
      return a.limbs_.size() < b.limbs_.size() ? -1 : 1;
    for (size_t i = a.limbs_.size(); i-- > 0;)
      if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] < b.limbs_[i] ? -1 : 1;
    return 0;
  }

  friend bool operator<(const BigInt& a, const BigInt& b) {
    if (a.neg_ != b.neg_) return a.neg_;
    int c = cmp_mag(a, b);
    return a.neg_ ? c > 0 : c < 0;
  }

  BigInt operator-() const {
    BigInt out = *this;
    if (!out.is_zero()) out.neg_ = !out.neg_;
    return out;
  }

  friend BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.neg_ == b.neg_) {
      BigInt out = add_mag(a, b);
      out.neg_ = a.neg_ && !out.is_zero();
      return out;
    }
    int c = cmp_mag(a, b);
    if (c == 0) return BigInt();
    BigInt out = c > 0 ? sub_mag(a, b) : sub_mag(b, a);
    out.neg_ = (c > 0 ? a.neg_ : b.neg_) && !out.is_zero();
    return out;
  }

  friend BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

  friend BigInt operator*(const BigInt& a, const BigInt& b) {
    if (a.is_zero() || b.is_zero()) return BigInt();
    BigInt out;
    out.limbs_.assign(a.limbs_.size() + b.limbs_.size(), 0);
    for (size_t i = 0; i < a.limbs_.size(); ++i) {
      uint64_t carry = 0;
      for (size_t j = 0; j < b.limbs_.size(); ++j) {
        uint64_t cur = out.limbs_[i + j] +
                       static_cast<uint64_t>(a.limbs_[i]) * b.limbs_[j] +
                       carry;
        out.limbs_[i + j] = static_cast<uint32_t>(cur);
        carry = cur >> 32;
      }
      size_t k = i + b.limbs_.size();
      while (carry) {
        uint64_t cur = out.limbs_[k] + carry;
        out.limbs_[k] = static_cast<uint32_t>(cur);
        carry = cur >> 32;
        ++k;
      }
    }
    out.trim();
    out.neg_ = a.neg_ != b.neg_;
    return out;
  }

  // Quotient and remainder with |r| < |b|, truncated toward zero.
  static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.is_zero()) throw std::domain_error("BigInt division by zero");
    q = BigInt();
    r = BigInt();
    if (cmp_mag(a, b) < 0) {
      r = a;
      return;
    }
    // Long division over bits; fine at the scales the polynomial layer sees.
    size_t bits = a.limbs_.size() * 32;
    q.limbs_.assign(a.limbs_.size(), 0);
    for (size_t i = bits; i-- > 0;) {
      r.shift_left_one();
      if (a.bit(i)) {
        if (r.limbs_.empty())
          r.limbs_.push_back(1);
        else
          r.limbs_[0] |= 1;
      }
      if (cmp_mag(r, b) >= 0) {
        BigInt tmp = sub_mag(r, b);
        r.limbs_ = std::move(tmp.limbs_);
        q.limbs_[i / 32] |= (1u << (i % 32));
      }
    }
    q.trim();
    r.trim();
    q.neg_ = !q.is_zero() && (a.neg_ != b.neg_);
    r.neg_ = !r.is_zero() && a.neg_;
  }

  friend BigInt operator/(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return q;
  }
  friend BigInt operator%(const BigInt& a, const BigInt& b) {
    BigInt q, r;
    divmod(a, b, q, r);
    return r;
  }

  static BigInt gcd(BigInt a, BigInt b) {
    a.neg_ = false;
    b.neg_ = false;
    while (!b.is_zero()) {
      BigInt q, r;
      divmod(a, b, q, r);
      r.neg_ = false;
      a = std::move(b);
      b = std::move(r);
    }
    return a;
  }

  // Fits in int64?
  bool fits_int64() const {
    if (limbs_.size() > 2) return false;
    unsigned long long m = mag_u64();
    if (neg_) return m <= 0x8000000000000000ULL;
    return m <= 0x7FFFFFFFFFFFFFFFULL;
  }

  long long to_int64() const {
    if (!fits_int64()) throw ExactOverflow();
    unsigned long long m = mag_u64();
    return neg_ ? -static_cast<long long>(m) : static_cast<long long>(m);
  }

  double to_double() const {
    double v = 0.0;
    for (size_t i = limbs_.size(); i-- > 0;)
      v = v * 4294967296.0 + limbs_[i];
    return neg_ ? -v : v;
  }

  std::string str() const {
    if (is_zero()) return "0";
    BigInt tmp = *this;
    tmp.neg_ = false;
    std::string digits;
    BigInt ten(10);
    while (!tmp.is_zero()) {
      BigInt q, r;
      divmod(tmp, ten, q, r);
      digits += static_cast<char>('0' + (r.is_zero() ? 0 : r.limbs_[0]));
      tmp = std::move(q);
    }
    if (neg_) digits += '-';
    return std::string(digits.rbegin(), digits.rend());
  }

  size_t limb_count() const { return limbs_.size(); }

 private:
  void push_u64(unsigned long long v) {
    while (v) {
      limbs_.push_back(static_cast<uint32_t>(v));
      v >>= 32;
    }
  }
  unsigned long long mag_u64() const {
    unsigned long long m = 0;
    if (limbs_.size() > 1) m = static_cast<unsigned long long>(limbs_[1]) << 32;
    if (!limbs_.empty()) m |= limbs_[0];
    return m;
  }
  void trim() {
    while (!limbs_.empty() && limbs_.back() == 0) limbs_.pop_back();
    if (limbs_.empty()) neg_ = false;
  }
  void shift_left_one() {
    uint32_t carry = 0;
    for (auto& l : limbs_) {
      uint32_t next = l >> 31;
      l = (l << 1) | carry;
      carry = next;
    }
    if (carry) limbs_.push_back(carry);
  }
  bool bit(size_t i) const {
    size_t limb = i / 32;
    if (limb >= limbs_.size()) return false;
    return (limbs_[limb] >> (i % 32)) & 1u;
  }

  static BigInt add_mag(const BigInt& a, const BigInt& b) {
    BigInt out;
    const auto& big = a.limbs_.size() >= b.limbs_.size() ? a : b;
    const auto& small = a.limbs_.size() >= b.limbs_.size() ? b : a;
    out.limbs_ = big.limbs_;
    uint64_t carry = 0;
    for (size_t i = 0; i < out.limbs_.size(); ++i) {
      uint64_t cur = static_cast<uint64_t>(out.limbs_[i]) + carry +
                     (i < small.limbs_.size() ? small.limbs_[i] : 0);
      out.limbs_[i] = static_cast<uint32_t>(cur);
      carry = cur >> 32;
      if (!carry && i >= small.limbs_.size()) break;
    }
    if (carry) out.limbs_.push_back(static_cast<uint32_t>(carry));
    return out;
  }

  // Requires |a| >= |b|.
  static BigInt sub_mag(const BigInt& a, const BigInt& b) {
    BigInt out;
    out.limbs_ = a.limbs_;
    int64_t borrow = 0;
    for (size_t i = 0; i < out.limbs_.size(); ++i) {
      int64_t cur = static_cast<int64_t>(out.limbs_[i]) - borrow -
                    (i < b.limbs_.size() ? b.limbs_[i] : 0);
      if (cur < 0) {
        cur += 1LL << 32;
        borrow = 1;
      } else {
        borrow = 0;
      }
      out.limbs_[i] = static_cast<uint32_t>(cur);
    }
    out.trim();
    return out;
  }

  bool neg_ = false;
  std::vector<uint32_t> limbs_;  // little-endian, base 2^32
};

// Exact rational over BigInt, canonical (den > 0, reduced).
class BigRational {
 public:
  BigRational() : num_(0), den_(1) {}
  BigRational(long long v) : num_(v), den_(1) {}  // NOLINT
  BigRational(const Rational& r) : num_(r.num()), den_(r.den()) {}  // NOLINT
  BigRational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) {
    normalize();
  }

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_ == BigInt(1) && den_ == BigInt(1); }

  friend BigRational operator+(const BigRational& a, const BigRational& b) {
    return BigRational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend BigRational operator-(const BigRational& a, const BigRational& b) {
    return BigRational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend BigRational operator*(const BigRational& a, const BigRational& b) {
    return BigRational(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend BigRational operator/(const BigRational& a, const BigRational& b) {
    if (b.num_.is_zero())
      throw std::domain_error("rational division by zero");
    return BigRational(a.num_ * b.den_, a.den_ * b.num_);
  }
  BigRational operator-() const {
    BigRational out = *this;
    out.num_ = -out.num_;
    return out;
  }
  BigRational& operator+=(const BigRational& o) { return *this = *this + o; }

  friend bool operator==(const BigRational& a, const BigRational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const BigRational& a, const BigRational& b) {
    return !(a == b);
  }

  // Narrowing back to the expression layer's small rational.
  Rational to_rational() const {
    return Rational(num_.to_int64(), den_.to_int64());
  }
  double to_double() const { return num_.to_double() / den_.to_double(); }

 private:
  void normalize() {
    if (den_.is_zero()) throw std::domain_error("zero denominator");
    if (den_.negative()) {
      num_ = -num_;
      den_ = -den_;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_zero() && g != BigInt(1)) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
    if (num_.is_zero()) den_ = BigInt(1);
  }

  BigInt num_, den_;
};

}  // namespace laxquad
