#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmp.h>

#include "todabrane/error.hpp"

namespace tb {

/// Arbitrary-precision rational number, always stored in lowest terms with a
/// positive denominator. Every operation is exact; there is no rounding
/// anywhere in this class. Backed by GMP's mpq layer.
class Rational {
 public:
  Rational() { mpq_init(q_); }
  Rational(long n) {  // NOLINT: implicit by design, mirrors integer literals
    mpq_init(q_);
    mpq_set_si(q_, n, 1);
  }
  Rational(long num, long den);
  Rational(const Rational& other) {
    mpq_init(q_);
    mpq_set(q_, other.q_);
  }
  Rational(Rational&& other) noexcept {
    mpq_init(q_);
    mpq_swap(q_, other.q_);
  }
  Rational& operator=(const Rational& other) {
    if (this != &other) mpq_set(q_, other.q_);
    return *this;
  }
  Rational& operator=(Rational&& other) noexcept {
    if (this != &other) mpq_swap(q_, other.q_);
    return *this;
  }
  ~Rational() { mpq_clear(q_); }

  /// Parses "num", "num/den" or "-num/den" (decimal digits only).
  /// Rejects zero denominators and any other malformed text.
  static Rational from_string(std::string_view text);

  /// Exact conversion of a finite double (every finite double is rational).
  static Rational from_double_exact(double value);

  bool is_zero() const { return mpq_sgn(q_) == 0; }
  bool is_one() const { return mpq_cmp_si(q_, 1, 1) == 0; }
  int sign() const { return mpq_sgn(q_); }

  /// True iff the denominator is 1.
  bool is_integer() const { return mpz_cmp_ui(mpq_denref(q_), 1) == 0; }
  /// Integer value when is_integer() and it fits in a long; throws otherwise.
  long to_long() const;

  Rational& operator+=(const Rational& rhs) {
    mpq_add(q_, q_, rhs.q_);
    return *this;
  }
  Rational& operator-=(const Rational& rhs) {
    mpq_sub(q_, q_, rhs.q_);
    return *this;
  }
  Rational& operator*=(const Rational& rhs) {
    mpq_mul(q_, q_, rhs.q_);
    return *this;
  }
  Rational& operator/=(const Rational& rhs);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const {
    Rational r(*this);
    mpq_neg(r.q_, r.q_);
    return r;
  }

  friend bool operator==(const Rational& a, const Rational& b) {
    return mpq_equal(a.q_, b.q_) != 0;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return mpq_cmp(a.q_, b.q_) < 0;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return mpq_cmp(a.q_, b.q_) <= 0;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator>=(const Rational& a, const Rational& b) { return b <= a; }

  Rational abs() const {
    Rational r(*this);
    mpq_abs(r.q_, r.q_);
    return r;
  }

  /// this^e for any integer e; throws on 0^negative.
  Rational pow_int(long e) const;

  Rational reciprocal() const;

  /// "num/den", or just "num" when the denominator is 1.
  std::string to_string() const;
  std::string numerator_string() const;
  std::string denominator_string() const;

  double to_double() const { return mpq_get_d(q_); }

  /// Raw handle, used by tests that cross-check against plain mpz arithmetic.
  const __mpq_struct* raw() const { return q_; }

 private:
  mpq_t q_;
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace tb
