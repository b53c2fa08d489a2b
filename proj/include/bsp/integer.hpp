#pragma once

// Exact integer with an inline int64 fast path that promotes to an
// arbitrary-precision cpp_int on overflow.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <limits>
#include <memory>
#include <ostream>
#include <string>
#include <string_view>

namespace bsp {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class Integer {
 public:
  Integer() = default;
  Integer(long long v) : small_(v) {}  // NOLINT: implicit by intent
  explicit Integer(const BigInt& b) { assign(b); }

  Integer(const Integer& o) : small_(o.small_) {
    if (o.big_) big_ = std::make_unique<BigInt>(*o.big_);
  }
  Integer(Integer&&) noexcept = default;
  Integer& operator=(const Integer& o) {
    if (this != &o) {
      small_ = o.small_;
      big_ = o.big_ ? std::make_unique<BigInt>(*o.big_) : nullptr;
    }
    return *this;
  }
  Integer& operator=(Integer&&) noexcept = default;

  static Integer parse(std::string_view text) {
    return Integer(BigInt(std::string(text)));
  }

  bool is_small() const { return !big_; }
  bool is_zero() const { return !big_ && small_ == 0; }
  int sign() const {
    if (big_) return big_->sign();
    return (small_ > 0) - (small_ < 0);
  }
  long long small_value() const { return small_; }

  BigInt to_big() const { return big_ ? *big_ : BigInt(small_); }

  std::string str() const { return big_ ? big_->str() : std::to_string(small_); }

  Integer& operator+=(const Integer& o) {
    long long r;
    if (!big_ && !o.big_ && !__builtin_add_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
    assign(to_big() + o.to_big());
    return *this;
  }
  Integer& operator-=(const Integer& o) {
    long long r;
    if (!big_ && !o.big_ && !__builtin_sub_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
    assign(to_big() - o.to_big());
    return *this;
  }
  Integer& operator*=(const Integer& o) {
    long long r;
    if (!big_ && !o.big_ && !__builtin_mul_overflow(small_, o.small_, &r)) {
      small_ = r;
      return *this;
    }
    assign(to_big() * o.to_big());
    return *this;
  }

  friend Integer operator+(Integer a, const Integer& b) { return a += b; }
  friend Integer operator-(Integer a, const Integer& b) { return a -= b; }
  friend Integer operator*(Integer a, const Integer& b) { return a *= b; }
  Integer operator-() const { return Integer(0) - *this; }

  friend bool operator==(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) return a.small_ == b.small_;
    return a.to_big() == b.to_big();
  }
  friend std::strong_ordering operator<=>(const Integer& a, const Integer& b) {
    if (!a.big_ && !b.big_) return a.small_ <=> b.small_;
    const BigInt x = a.to_big(), y = b.to_big();
    if (x < y) return std::strong_ordering::less;
    if (x > y) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Integer& v) { return os << v.str(); }

 private:
  void assign(const BigInt& b) {
    if (b >= std::numeric_limits<long long>::min() && b <= std::numeric_limits<long long>::max()) {
      small_ = static_cast<long long>(b);
      big_.reset();
    } else {
      big_ = std::make_unique<BigInt>(b);
      small_ = 0;
    }
  }

  long long small_ = 0;
  std::unique_ptr<BigInt> big_;
};

/// Binomial coefficient C(n, k) for n, k >= 0.
inline Integer binomial(long long n, long long k) {
  if (k < 0 || n < 0 || k > n) return Integer(0);
  k = std::min(k, n - k);
  BigInt r = 1;
  for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return Integer(r);
}

}  // namespace bsp
