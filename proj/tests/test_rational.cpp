#include "todabrane/rational.hpp"

#include <functional>
#include <random>

#include <doctest.h>

#include "todabrane/error.hpp"

using tb::ErrorCode;
using tb::Rational;

namespace {

bool throws_code(ErrorCode expected, const std::function<void()>& f) {
  try {
    f();
  } catch (const tb::Error& e) {
    return e.code() == expected;
  }
  return false;
}

}  // namespace

TEST_CASE("construction and canonical form") {
  CHECK(Rational(6, 4).to_string() == "3/2");
  CHECK(Rational(-6, 4).to_string() == "-3/2");
  CHECK(Rational(6, -4).to_string() == "-3/2");
  CHECK(Rational(-6, -4).to_string() == "3/2");
  CHECK(Rational(0, 7).to_string() == "0");
  CHECK(Rational(5).to_string() == "5");
  CHECK(Rational().is_zero());
  CHECK(throws_code(ErrorCode::invalid_argument, [] { Rational(1, 0); }));
}

TEST_CASE("string parsing is strict") {
  CHECK(Rational::from_string("6/4") == Rational(3, 2));
  CHECK(Rational::from_string("-6/4") == Rational(-3, 2));
  CHECK(Rational::from_string("17") == Rational(17));
  CHECK(Rational::from_string("0") == Rational(0));
  for (const char* bad : {"", "1/0", "1/", "/2", "1/-2", "+1", "1.5", " 1", "1 ", "a", "1/2/3"})
    CHECK_MESSAGE(throws_code(ErrorCode::parse_error, [&] { Rational::from_string(bad); }),
                  "accepted '" << bad << "'");
}

TEST_CASE("string round trip") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<long> num(-1000000, 1000000);
  std::uniform_int_distribution<long> den(1, 1000000);
  for (int i = 0; i < 200; ++i) {
    Rational r(num(rng), den(rng));
    CHECK(Rational::from_string(r.to_string()) == r);
  }
}

TEST_CASE("arithmetic vs integer cross-multiplication oracle") {
  // (a/b) op (c/d) is checked against a direct long-integer construction of
  // the result, entirely independent of the class's own add/mul code.
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> num(-1000, 1000);
  std::uniform_int_distribution<long> den(1, 1000);
  for (int i = 0; i < 1000; ++i) {
    long a = num(rng), b = den(rng), c = num(rng), d = den(rng);
    Rational x(a, b), y(c, d);
    CHECK(x + y == Rational(a * d + c * b, b * d));
    CHECK(x - y == Rational(a * d - c * b, b * d));
    CHECK(x * y == Rational(a * c, b * d));
    if (c != 0) CHECK(x / y == Rational(a * d, b * c));
    CHECK((x < y) == (a * d < c * b));
    CHECK((x == y) == (a * d == c * b));
    CHECK((x <= y) == (a * d <= c * b));
  }
}

TEST_CASE("sign, abs, reciprocal") {
  CHECK(Rational(-3, 7).sign() == -1);
  CHECK(Rational(0).sign() == 0);
  CHECK(Rational(3, 7).sign() == 1);
  CHECK(Rational(-3, 7).abs() == Rational(3, 7));
  CHECK(Rational(3, 7).reciprocal() == Rational(7, 3));
  CHECK(Rational(-3, 7).reciprocal() == Rational(-7, 3));
  CHECK(throws_code(ErrorCode::invalid_argument, [] { Rational(0).reciprocal(); }));
  CHECK(throws_code(ErrorCode::invalid_argument, [] { Rational(1) / Rational(0); }));
}

TEST_CASE("integer predicates") {
  CHECK(Rational(4, 2).is_integer());
  CHECK(Rational(4, 2).to_long() == 2);
  CHECK(Rational(-9, 3).to_long() == -3);
  CHECK_FALSE(Rational(1, 2).is_integer());
  CHECK(throws_code(ErrorCode::invalid_argument, [] { Rational(1, 2).to_long(); }));
  CHECK(Rational(1).is_one());
  CHECK_FALSE(Rational(2).is_one());
}

TEST_CASE("integer powers") {
  CHECK(Rational(2, 3).pow_int(3) == Rational(8, 27));
  CHECK(Rational(2, 3).pow_int(0) == Rational(1));
  CHECK(Rational(2, 3).pow_int(-2) == Rational(9, 4));
  CHECK(Rational(-2, 3).pow_int(3) == Rational(-8, 27));
  CHECK(Rational(0).pow_int(5) == Rational(0));
  CHECK(throws_code(ErrorCode::invalid_argument, [] { Rational(0).pow_int(-1); }));

  // Repeated-multiplication oracle.
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-20, 20);
  std::uniform_int_distribution<long> den(1, 20);
  std::uniform_int_distribution<long> exp(1, 8);
  for (int i = 0; i < 100; ++i) {
    Rational x(num(rng), den(rng));
    long e = exp(rng);
    Rational by_mul(1);
    for (long k = 0; k < e; ++k) by_mul *= x;
    CHECK(x.pow_int(e) == by_mul);
  }
}

TEST_CASE("exact double conversion") {
  CHECK(Rational::from_double_exact(0.5) == Rational(1, 2));
  CHECK(Rational::from_double_exact(-0.75) == Rational(-3, 4));
  CHECK(Rational::from_double_exact(3.0) == Rational(3));
  // 0.1 is not 1/10 in binary; the conversion must capture the true value.
  Rational tenth = Rational::from_double_exact(0.1);
  CHECK(tenth != Rational(1, 10));
  CHECK(tenth.to_double() == 0.1);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1e6, 1e6);
  for (int i = 0; i < 200; ++i) {
    double v = uni(rng);
    CHECK(Rational::from_double_exact(v).to_double() == v);
  }
  CHECK(throws_code(ErrorCode::invalid_argument,
                    [] { Rational::from_double_exact(1.0 / 0.0); }));
}

TEST_CASE("no overflow at scale") {
  // 10^40 exceeds any machine word; exactness must survive.
  Rational big = Rational(10).pow_int(40);
  CHECK(big.to_string() == "1" + std::string(40, '0'));
  CHECK(big * big.reciprocal() == Rational(1));
  CHECK((big + Rational(1)) - big == Rational(1));
}

TEST_CASE("numerator and denominator strings") {
  Rational r(-10, 4);
  CHECK(r.numerator_string() == "-5");
  CHECK(r.denominator_string() == "2");
  CHECK(Rational(7).denominator_string() == "1");
}
