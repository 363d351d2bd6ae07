#include "todabrane/param_poly.hpp"

#include <random>
#include <vector>

#include <doctest.h>

#include "todabrane/error.hpp"

using tb::ErrorCode;
using tb::ExponentVec;
using tb::ParamPoly;
using tb::Rational;

namespace {

Rational rat(long n, long d = 1) { return Rational(n, d); }

/// Random sparse polynomial with small coefficients and exponents.
ParamPoly random_poly(std::mt19937_64& rng, int arity) {
  std::uniform_int_distribution<int> n_terms(0, 4);
  std::uniform_int_distribution<long> num(-6, 6);
  std::uniform_int_distribution<long> den(1, 5);
  std::uniform_int_distribution<unsigned> exp(0, 3);
  ParamPoly p(arity);
  int terms = n_terms(rng);
  for (int t = 0; t < terms; ++t) {
    ExponentVec e(static_cast<size_t>(arity));
    for (auto& x : e) x = exp(rng);
    p += ParamPoly::monomial(arity, rat(num(rng), den(rng)), e);
  }
  return p;
}

std::vector<Rational> random_values(std::mt19937_64& rng, int arity) {
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 7);
  std::vector<Rational> v;
  v.reserve(static_cast<size_t>(arity));
  for (int i = 0; i < arity; ++i) v.emplace_back(num(rng), den(rng));
  return v;
}

}  // namespace

TEST_CASE("factories produce the expected terms") {
  ParamPoly zero(2);
  CHECK(zero.is_zero());
  CHECK(zero.arity() == 2);
  CHECK(zero.term_count() == 0);
  CHECK(zero.is_constant());
  CHECK(zero.constant_value() == rat(0));

  ParamPoly c = ParamPoly::constant(2, rat(5, 3));
  CHECK(c.is_constant());
  CHECK(c.constant_value() == rat(5, 3));
  CHECK(c.term_count() == 1);
  CHECK(c.total_degree() == 0);

  ParamPoly p1 = ParamPoly::symbol(2, 0);
  ParamPoly p2 = ParamPoly::symbol(2, 1);
  CHECK_FALSE(p1.is_constant());
  CHECK(p1.total_degree() == 1);
  CHECK(p1 != p2);

  ParamPoly m = ParamPoly::monomial(2, rat(1, 4), {1, 2});
  CHECK(m.term_count() == 1);
  CHECK(m.total_degree() == 3);
  CHECK(m == p1 * p2 * p2 * ParamPoly::constant(2, rat(1, 4)));

  // Zero coefficients never enter the term map.
  ParamPoly z = ParamPoly::monomial(2, rat(0), {3, 3});
  CHECK(z.is_zero());
}

TEST_CASE("constant(arity, 0) equals the default zero polynomial") {
  CHECK(ParamPoly::constant(3, rat(0)) == ParamPoly(3));
}

TEST_CASE("cancellation removes terms entirely") {
  ParamPoly p1 = ParamPoly::symbol(2, 0);
  ParamPoly q = p1 - p1;
  CHECK(q.is_zero());
  CHECK(q.term_count() == 0);
  CHECK(q == ParamPoly(2));

  ParamPoly half = ParamPoly::monomial(2, rat(1, 2), {1, 0});
  ParamPoly sum = half + half - p1;
  CHECK(sum.is_zero());
}

TEST_CASE("ring axioms hold on random polynomials") {
  std::mt19937_64 rng(20240811);
  for (int arity : {1, 2, 3}) {
    for (int trial = 0; trial < 40; ++trial) {
      ParamPoly a = random_poly(rng, arity);
      ParamPoly b = random_poly(rng, arity);
      ParamPoly c = random_poly(rng, arity);
      ParamPoly one = ParamPoly::constant(arity, rat(1));

      CHECK(a + b == b + a);
      CHECK((a + b) + c == a + (b + c));
      CHECK(a * b == b * a);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a + (-a) == ParamPoly(arity));
      CHECK(a * one == a);
      CHECK(a * ParamPoly(arity) == ParamPoly(arity));
      CHECK(a.scaled(rat(3, 2)) == a * ParamPoly::constant(arity, rat(3, 2)));
      CHECK(a - b == a + (-b));
    }
  }
}

TEST_CASE("eval is a ring homomorphism") {
  std::mt19937_64 rng(991);
  for (int arity : {1, 2, 3}) {
    for (int trial = 0; trial < 30; ++trial) {
      ParamPoly a = random_poly(rng, arity);
      ParamPoly b = random_poly(rng, arity);
      std::vector<Rational> v = random_values(rng, arity);
      CHECK((a + b).eval(v) == a.eval(v) + b.eval(v));
      CHECK((a * b).eval(v) == a.eval(v) * b.eval(v));
      CHECK((-a).eval(v) == -a.eval(v));
    }
  }
}

TEST_CASE("eval substitutes symbols by position") {
  // 1/4 * P1 * P2^2 at P = (2, 3) gives 1/4 * 2 * 9 = 9/2.
  ParamPoly m = ParamPoly::monomial(2, rat(1, 4), {1, 2});
  std::vector<Rational> v{rat(2), rat(3)};
  CHECK(m.eval(v) == rat(9, 2));

  std::vector<Rational> empty;
  CHECK(ParamPoly::constant(0, rat(7)).eval(empty) == rat(7));
}

TEST_CASE("arity mismatches are rejected") {
  ParamPoly a(1);
  ParamPoly b(2);
  CHECK_THROWS_AS(a += b, tb::Error);
  CHECK_THROWS_AS(a * b, tb::Error);

  ParamPoly p = ParamPoly::symbol(2, 0);
  std::vector<Rational> one_value{rat(1)};
  try {
    p.eval(one_value);
    FAIL("eval with the wrong value count must throw");
  } catch (const tb::Error& e) {
    CHECK(e.code() == ErrorCode::arity_mismatch);
  }
}

TEST_CASE("graded-lex order sorts by total degree then exponents") {
  // P2 (degree 1) precedes P1^2 (degree 2); within degree 2,
  // (0,2) precedes (1,1) precedes (2,0).
  ParamPoly p = ParamPoly::monomial(2, rat(1), {2, 0}) +
                ParamPoly::monomial(2, rat(2), {0, 1}) +
                ParamPoly::monomial(2, rat(3), {1, 1}) +
                ParamPoly::monomial(2, rat(4), {0, 2});
  std::vector<ExponentVec> order;
  for (const auto& [e, c] : p.terms()) order.push_back(e);
  REQUIRE(order.size() == 4);
  CHECK(order[0] == ExponentVec{0, 1});
  CHECK(order[1] == ExponentVec{0, 2});
  CHECK(order[2] == ExponentVec{1, 1});
  CHECK(order[3] == ExponentVec{2, 0});
}

TEST_CASE("JSON form is canonical and round trips") {
  ParamPoly p = ParamPoly::monomial(2, rat(1, 36), {2, 1}) +
                ParamPoly::monomial(2, rat(1, 4), {1, 1});
  nlohmann::json j = p.to_json();
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  CHECK(j[0]["coeff"] == "1/4");
  CHECK(j[0]["exps"] == nlohmann::json::array({1, 1}));
  CHECK(j[1]["coeff"] == "1/36");
  CHECK(j[1]["exps"] == nlohmann::json::array({2, 1}));

  CHECK(ParamPoly::from_json(j, 2) == p);

  // The zero polynomial is the empty list.
  CHECK(ParamPoly(3).to_json() == nlohmann::json::array());
  CHECK(ParamPoly::from_json(nlohmann::json::array(), 3) == ParamPoly(3));
}

TEST_CASE("JSON round trip is exact on random polynomials") {
  std::mt19937_64 rng(4242);
  for (int trial = 0; trial < 50; ++trial) {
    ParamPoly p = random_poly(rng, 2);
    CHECK(ParamPoly::from_json(p.to_json(), 2) == p);
  }
}

TEST_CASE("malformed JSON terms are rejected") {
  // Coefficients must be strings, not numbers.
  nlohmann::json bad_coeff = nlohmann::json::array();
  bad_coeff.push_back({{"coeff", 0.25}, {"exps", {1, 1}}});
  CHECK_THROWS(ParamPoly::from_json(bad_coeff, 2));

  // Exponent count must match the arity.
  nlohmann::json bad_exps = nlohmann::json::array();
  bad_exps.push_back({{"coeff", "1/4"}, {"exps", {1, 1, 1}}});
  CHECK_THROWS_AS(ParamPoly::from_json(bad_exps, 2), tb::Error);

  CHECK_THROWS_AS(ParamPoly::from_json(nlohmann::json::object(), 2), tb::Error);
}

TEST_CASE("to_string lists terms in canonical order") {
  ParamPoly p = ParamPoly::monomial(2, rat(1, 36), {2, 1}) +
                ParamPoly::monomial(2, rat(1, 4), {1, 1});
  CHECK(p.to_string() == "1/4*P1*P2 + 1/36*P1^2*P2");
  CHECK(ParamPoly(2).to_string() == "0");
  CHECK(ParamPoly::constant(2, rat(-3, 7)).to_string() == "-3/7");
}
