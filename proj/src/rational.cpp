#include "todabrane/rational.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

namespace tb {

Rational::Rational(long num, long den) {
  mpq_init(q_);
  if (den == 0) fail(ErrorCode::invalid_argument, "rational with zero denominator");
  mpq_set_si(q_, num, 1);
  mpq_t d;
  mpq_init(d);
  mpq_set_si(d, den, 1);
  mpq_div(q_, q_, d);
  mpq_clear(d);
}

namespace {

bool valid_rational_text(std::string_view s) {
  // ^-?\d+(/\d+)?$; negative denominators and whitespace are rejected.
  size_t i = 0;
  if (i < s.size() && s[i] == '-') ++i;
  size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  if (digits == 0) return false;
  if (i == s.size()) return true;
  if (s[i] != '/') return false;
  ++i;
  digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  return digits > 0 && i == s.size();
}

}  // namespace

Rational Rational::from_string(std::string_view text) {
  if (!valid_rational_text(text))
    fail(ErrorCode::parse_error, "malformed rational '" + std::string(text) + "'");
  Rational r;
  std::string owned(text);
  if (mpq_set_str(r.q_, owned.c_str(), 10) != 0)
    fail(ErrorCode::parse_error, "malformed rational '" + owned + "'");
  if (mpz_sgn(mpq_denref(r.q_)) == 0)
    fail(ErrorCode::parse_error, "zero denominator in '" + owned + "'");
  mpq_canonicalize(r.q_);
  return r;
}

Rational Rational::from_double_exact(double value) {
  if (!std::isfinite(value))
    fail(ErrorCode::invalid_argument, "non-finite double cannot become a rational");
  Rational r;
  mpq_set_d(r.q_, value);
  mpq_canonicalize(r.q_);
  return r;
}

long Rational::to_long() const {
  if (!is_integer()) fail(ErrorCode::invalid_argument, "to_long on non-integer " + to_string());
  if (!mpz_fits_slong_p(mpq_numref(q_)))
    fail(ErrorCode::invalid_argument, "integer too large for long: " + to_string());
  return mpz_get_si(mpq_numref(q_));
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (rhs.is_zero()) fail(ErrorCode::invalid_argument, "division by zero rational");
  mpq_div(q_, q_, rhs.q_);
  return *this;
}

Rational Rational::pow_int(long e) const {
  if (e == 0) return Rational(1);
  if (is_zero() && e < 0) fail(ErrorCode::invalid_argument, "0 raised to a negative power");
  Rational base = e > 0 ? *this : reciprocal();
  unsigned long k = static_cast<unsigned long>(e > 0 ? e : -e);
  Rational r;
  mpz_pow_ui(mpq_numref(r.q_), mpq_numref(base.q_), k);
  mpz_pow_ui(mpq_denref(r.q_), mpq_denref(base.q_), k);
  // base is canonical, so num^k/den^k is already in lowest terms.
  return r;
}

Rational Rational::reciprocal() const {
  if (is_zero()) fail(ErrorCode::invalid_argument, "reciprocal of zero");
  Rational r(*this);
  mpq_inv(r.q_, r.q_);
  return r;
}

std::string Rational::to_string() const {
  char* s = mpq_get_str(nullptr, 10, q_);
  std::string out(s);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(s, out.size() + 1);
  return out;
}

std::string Rational::numerator_string() const {
  char* s = mpz_get_str(nullptr, 10, mpq_numref(q_));
  std::string out(s);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(s, out.size() + 1);
  return out;
}

std::string Rational::denominator_string() const {
  char* s = mpz_get_str(nullptr, 10, mpq_denref(q_));
  std::string out(s);
  void (*freefunc)(void*, size_t);
  mp_get_memory_functions(nullptr, nullptr, &freefunc);
  freefunc(s, out.size() + 1);
  return out;
}

std::ostream& operator<<(std::ostream& os, const Rational& r) {
  return os << r.to_string();
}

}  // namespace tb
