#include "todabrane/toda.hpp"

#include <cstdlib>
#include <random>
#include <vector>

#include <doctest.h>

#include "todabrane/error.hpp"

using tb::ConjectureReport;
using tb::ConjectureVerdict;
using tb::ErrorCode;
using tb::ModuliSolution;
using tb::ParamPoly;
using tb::QuasiCartanMatrix;
using tb::Rational;
using tb::RationalMatrix;
using tb::ResidualPath;
using tb::Series;
using tb::SolveMode;

namespace {

Rational rat(long n, long d = 1) { return Rational(n, d); }

/// Monomial c * P1^e1 * P2^e2 in the two-parameter ring.
ParamPoly mono(long n, long d, unsigned e1, unsigned e2) {
  return ParamPoly::monomial(2, rat(n, d), {e1, e2});
}

ModuliSolution solve_named(const char* algebra, int order,
                           SolveMode mode = SolveMode::symbolic,
                           std::span<const Rational> values = {}) {
  return tb::solve_coefficients(QuasiCartanMatrix::named(algebra), order, mode, values);
}

/// Checks that brane `s` matches `expected` coefficient for coefficient and
/// is identically zero beyond the end of the list.
void check_golden(const ModuliSolution& sol, int s, const std::vector<ParamPoly>& expected) {
  for (size_t k = 0; k < expected.size(); ++k) {
    INFO("brane ", s, ", z^", k);
    CHECK(sol.coeff(s, static_cast<int>(k)) == expected[k]);
  }
  for (int k = static_cast<int>(expected.size()); k <= sol.order; ++k) {
    INFO("brane ", s, ", z^", k, " should vanish");
    CHECK(sol.coeff(s, k).is_zero());
  }
}

RationalMatrix mat2(const Rational& a12, const Rational& a21) {
  RationalMatrix m(2, 2);
  m.at(0, 0) = Rational(2);
  m.at(0, 1) = a12;
  m.at(1, 0) = a21;
  m.at(1, 1) = Rational(2);
  return m;
}

std::vector<Rational> random_params(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(1, 9);
  std::uniform_int_distribution<long> den(1, 5);
  return {rat(num(rng), den(rng)), rat(num(rng), den(rng))};
}

}  // namespace

TEST_CASE("orthogonal branes give linear moduli functions") {
  ModuliSolution sol = solve_named("A1+A1", 5);
  std::vector<ParamPoly> h1{mono(1, 1, 0, 0), mono(1, 1, 1, 0)};
  std::vector<ParamPoly> h2{mono(1, 1, 0, 0), mono(1, 1, 0, 1)};
  check_golden(sol, 0, h1);
  check_golden(sol, 1, h2);
  CHECK(sol.brane_degree(0) == 1);
  CHECK(sol.brane_degree(1) == 1);
}

TEST_CASE("A2 moduli functions are the known quadratics") {
  ModuliSolution sol = solve_named("A2", 6);
  std::vector<ParamPoly> h1{mono(1, 1, 0, 0), mono(1, 1, 1, 0), mono(1, 4, 1, 1)};
  std::vector<ParamPoly> h2{mono(1, 1, 0, 0), mono(1, 1, 0, 1), mono(1, 4, 1, 1)};
  check_golden(sol, 0, h1);
  check_golden(sol, 1, h2);
}

TEST_CASE("C2 moduli functions match the degree (3,4) polynomials") {
  ModuliSolution sol = solve_named("C2", 8);
  std::vector<ParamPoly> h1{
      mono(1, 1, 0, 0),
      mono(1, 1, 1, 0),
      mono(1, 4, 1, 1),
      mono(1, 36, 2, 1),
  };
  std::vector<ParamPoly> h2{
      mono(1, 1, 0, 0),
      mono(1, 1, 0, 1),
      mono(1, 2, 1, 1),
      mono(1, 9, 2, 1),
      mono(1, 144, 2, 2),
  };
  check_golden(sol, 0, h1);
  check_golden(sol, 1, h2);
  CHECK(sol.brane_degree(0) == 3);
  CHECK(sol.brane_degree(1) == 4);
}

TEST_CASE("G2 moduli functions match the degree (6,10) polynomials") {
  ModuliSolution sol = solve_named("G2", 12);
  std::vector<ParamPoly> h1{
      mono(1, 1, 0, 0),
      mono(1, 1, 1, 0),
      mono(1, 4, 1, 1),
      mono(1, 18, 2, 1),
      mono(1, 144, 3, 1),
      mono(1, 3600, 3, 2),
      mono(1, 129600, 4, 2),
  };
  std::vector<ParamPoly> h2{
      mono(1, 1, 0, 0),
      mono(1, 1, 0, 1),
      mono(3, 4, 1, 1),
      mono(1, 3, 2, 1),
      mono(1, 48, 2, 2) + mono(1, 16, 3, 1),
      mono(7, 600, 3, 2),
      mono(1, 1600, 3, 3) + mono(1, 1728, 4, 2),
      mono(1, 10800, 4, 3),
      mono(1, 172800, 5, 3),
      mono(1, 4665600, 6, 3),
      mono(1, 466560000, 6, 4),
  };
  check_golden(sol, 0, h1);
  check_golden(sol, 1, h2);
  CHECK(sol.brane_degree(0) == 6);
  CHECK(sol.brane_degree(1) == 10);
}

TEST_CASE("first-order coefficients follow the quadratic relation") {
  // The z^1 relation fixes the z^2 coefficient for any coupling matrix:
  // 4 P_s^{(2)} = P_s * sum_{t != s} (-A_st) P_t.
  std::mt19937_64 rng(909);
  std::uniform_int_distribution<long> num(-11, 5);
  std::uniform_int_distribution<long> den(1, 4);
  for (int trial = 0; trial < 12; ++trial) {
    Rational a12 = rat(num(rng), den(rng));
    Rational a21 = rat(num(rng), den(rng));
    QuasiCartanMatrix A(mat2(a12, a21));
    ModuliSolution sol = tb::solve_coefficients(A, 2, SolveMode::symbolic);
    ParamPoly p1 = ParamPoly::symbol(2, 0);
    ParamPoly p2 = ParamPoly::symbol(2, 1);
    CHECK(sol.coeff(0, 2) == (p1 * p2).scaled(-a12 / rat(4)));
    CHECK(sol.coeff(1, 2) == (p1 * p2).scaled(-a21 / rat(4)));
  }
}

TEST_CASE("numeric mode binds the parameters exactly") {
  std::vector<Rational> ones{rat(1), rat(1)};
  ModuliSolution sol = solve_named("A2", 4, SolveMode::numeric, ones);
  CHECK(sol.mode == SolveMode::numeric);
  CHECK(sol.arity() == 0);
  CHECK(sol.numeric_coeff(0, 0) == rat(1));
  CHECK(sol.numeric_coeff(0, 1) == rat(1));
  CHECK(sol.numeric_coeff(0, 2) == rat(1, 4));
  CHECK(sol.numeric_coeff(0, 3) == rat(0));

  // H = (1 + z/2)^2: eval at z = 2 gives 4.
  std::vector<Rational> no_values;
  CHECK(sol.brane_series(0, 4).eval(rat(2), no_values) == rat(4));
}

TEST_CASE("numeric solve equals symbolic solve with substituted values") {
  std::mt19937_64 rng(20240814);
  for (const char* name : {"A1+A1", "A2", "C2", "B2", "G2"}) {
    ModuliSolution sym = solve_named(name, 8);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Rational> p = random_params(rng);
      ModuliSolution num = solve_named(name, 8, SolveMode::numeric, p);
      for (int s = 0; s < 2; ++s)
        for (int k = 0; k <= 8; ++k) {
          INFO(name, " brane ", s, " order ", k);
          CHECK(num.numeric_coeff(s, k) == sym.coeff(s, k).eval(p));
        }
    }
  }
}

TEST_CASE("transposing the coupling matrix relabels the branes") {
  ModuliSolution c2 = solve_named("C2", 6);
  ModuliSolution b2 = solve_named("B2", 6);
  std::mt19937_64 rng(515);
  for (int trial = 0; trial < 8; ++trial) {
    std::vector<Rational> p = random_params(rng);
    std::vector<Rational> swapped{p[1], p[0]};
    for (int k = 0; k <= 6; ++k) {
      CHECK(b2.coeff(0, k).eval(p) == c2.coeff(1, k).eval(swapped));
      CHECK(b2.coeff(1, k).eval(p) == c2.coeff(0, k).eval(swapped));
    }
  }
}

TEST_CASE("solver output is identical across runs and worker counts") {
  ModuliSolution a = solve_named("G2", 12);
  ModuliSolution b = solve_named("G2", 12);
  CHECK(a.to_json().dump() == b.to_json().dump());

  setenv("TODA_BRANE_THREADS", "1", 1);
  ModuliSolution serial = solve_named("G2", 12);
  unsetenv("TODA_BRANE_THREADS");
  CHECK(serial.to_json().dump() == a.to_json().dump());
}

TEST_CASE("residual vanishes identically on the polynomial path") {
  struct Case {
    const char* name;
    int order;
  };
  for (const Case& c : {Case{"A1+A1", 3}, Case{"A2", 4}, Case{"C2", 6}, Case{"G2", 12}}) {
    ModuliSolution sol = solve_named(c.name, c.order);
    auto res = tb::residual_check(QuasiCartanMatrix::named(c.name), sol, c.order);
    INFO(c.name);
    CHECK(res.polynomial_path);
    CHECK(res.all_zero());
  }
}

TEST_CASE("residual vanishes through the checked order for generic couplings") {
  // Non-integer couplings have no finite polynomial solution, so the check
  // runs on truncated series. The solved coefficients must still satisfy the
  // equations to every checkable order.
  std::mt19937_64 rng(64);
  std::uniform_int_distribution<long> num(1, 7);
  std::uniform_int_distribution<long> den(2, 5);
  for (int trial = 0; trial < 10; ++trial) {
    Rational a12 = rat(-num(rng), den(rng));
    Rational a21 = rat(-num(rng), den(rng));
    QuasiCartanMatrix A(mat2(a12, a21));
    ModuliSolution sol = tb::solve_coefficients(A, 8, SolveMode::symbolic);
    auto res = tb::residual_check(A, sol, 7);
    CHECK_FALSE(res.polynomial_path);
    CHECK(res.all_zero());
    for (const Series& r : res.residuals) CHECK(r.order() == 7);
  }
}

TEST_CASE("a corrupted coefficient leaves a nonzero residual") {
  ModuliSolution sol = solve_named("C2", 6);
  sol.coeffs[1][4] += ParamPoly::constant(2, rat(1, 1000));

  auto poly = tb::residual_check(QuasiCartanMatrix::named("C2"), sol, 6);
  CHECK(poly.polynomial_path);
  CHECK_FALSE(poly.all_zero());

  auto series = tb::residual_check(QuasiCartanMatrix::named("C2"), sol, 5,
                                   ResidualPath::truncated_series);
  CHECK_FALSE(series.polynomial_path);
  CHECK_FALSE(series.all_zero());
  // The z^3 relation is the first one that reads the perturbed z^4 value.
  CHECK(series.residuals[1].first_nonzero() == 3);
}

TEST_CASE("the exact path refuses inputs that are not finite polynomials") {
  // Solved only to order 3, H_2 has not terminated yet (degree 4).
  ModuliSolution shallow = solve_named("C2", 3);
  CHECK_THROWS_AS(tb::residual_check(QuasiCartanMatrix::named("C2"), shallow, 2,
                                     ResidualPath::exact_polynomial),
                  tb::Error);
  auto res = tb::residual_check(QuasiCartanMatrix::named("C2"), shallow, 2);
  CHECK_FALSE(res.polynomial_path);
  CHECK(res.all_zero());
}

TEST_CASE("conjecture verification confirms the tabulated algebras") {
  struct Case {
    const char* name;
    long n1, n2;
  };
  for (const Case& c : {Case{"A1+A1", 1, 1}, Case{"A2", 2, 2}, Case{"C2", 3, 4},
                        Case{"B2", 4, 3}, Case{"G2", 6, 10}}) {
    ConjectureReport report = tb::verify_conjecture(QuasiCartanMatrix::named(c.name), 4);
    INFO(c.name);
    CHECK(report.confirmed());
    CHECK(report.degrees_defined);
    REQUIRE(report.algebra.has_value());
    CHECK(*report.algebra == c.name);
    REQUIRE(report.branes.size() == 2);
    CHECK(*report.branes[0].degree == rat(c.n1));
    CHECK(*report.branes[1].degree == rat(c.n2));
    CHECK(report.branes[0].checked_from == static_cast<int>(c.n1) + 1);
    CHECK(report.branes[0].checked_to == static_cast<int>(std::max(c.n1, c.n2)) + 4);
    REQUIRE(report.solution.has_value());
    CHECK(report.solution->brane_degree(0) == static_cast<int>(c.n1));
    CHECK(report.solution->brane_degree(1) == static_cast<int>(c.n2));
  }
}

TEST_CASE("conjecture verification reports genuine violations") {
  // Off-diagonal (-2, 0): integer degrees (2, 1), but the first brane's z^3
  // coefficient is (2 P1 P2^2 - P1^2 P2)/18, not zero.
  QuasiCartanMatrix A(mat2(rat(-2), rat(0)));
  ConjectureReport report = tb::verify_conjecture(A, 3);
  CHECK(report.degrees_defined);
  CHECK_FALSE(report.confirmed());
  REQUIRE(report.branes.size() == 2);
  CHECK(report.branes[0].verdict == ConjectureVerdict::violation);
  CHECK(report.branes[0].violation_order == 3);
  REQUIRE(report.branes[0].first_nonzero.has_value());
  CHECK(*report.branes[0].first_nonzero ==
        mono(1, 9, 1, 2) + mono(-1, 18, 2, 1));
  CHECK(report.branes[1].verdict == ConjectureVerdict::polynomial_confirmed);
  CHECK(tb::verdict_string(report.branes[0].verdict, report.branes[0].violation_order) ==
        "violation-at-order-3");
}

TEST_CASE("singular matrices get the degrees-undefined verdict") {
  QuasiCartanMatrix A(mat2(rat(-2), rat(-2)));
  ConjectureReport report = tb::verify_conjecture(A);
  CHECK_FALSE(report.degrees_defined);
  CHECK_FALSE(report.confirmed());
  CHECK(report.note.find("singular") != std::string::npos);
  REQUIRE(report.branes.size() == 2);
  CHECK_FALSE(report.branes[0].degree.has_value());
  CHECK(report.branes[0].verdict == ConjectureVerdict::degrees_undefined);
  CHECK_FALSE(report.solution.has_value());
}

TEST_CASE("non-integer conjectured degrees are reported, not solved") {
  QuasiCartanMatrix A(mat2(rat(-1), rat(-3, 2)));
  ConjectureReport report = tb::verify_conjecture(A);
  CHECK_FALSE(report.degrees_defined);
  REQUIRE(report.branes.size() == 2);
  CHECK(*report.branes[0].degree == rat(12, 5));
  CHECK(*report.branes[1].degree == rat(14, 5));
  CHECK(report.branes[0].verdict == ConjectureVerdict::degrees_undefined);

  // Negative integer degrees are rejected the same way.
  QuasiCartanMatrix B(mat2(rat(-1), rat(-5)));
  ConjectureReport neg = tb::verify_conjecture(B);
  CHECK_FALSE(neg.degrees_defined);
}

TEST_CASE("the pruned product equals H_s^2 times the full product") {
  QuasiCartanMatrix A = QuasiCartanMatrix::named("G2");
  ModuliSolution sol = solve_named("G2", 8);
  std::vector<Series> H;
  for (int s = 0; s < 2; ++s) H.push_back(sol.brane_series(s, 8));
  for (int s = 0; s < 2; ++s) {
    Series full = tb::build_rhs_series(A, H, s);
    Series pruned = tb::build_rhs_pruned(A, H, s);
    CHECK(pruned == H[s] * H[s] * full);
  }
}

TEST_CASE("solution JSON carries mode-dependent coefficient encodings") {
  ModuliSolution sym = solve_named("A2", 3);
  nlohmann::json js = sym.to_json();
  CHECK(js["mode"] == "symbolic");
  CHECK(js["order"] == 3);
  CHECK(js["branes"].size() == 2);
  // Symbolic coefficients serialize as term lists.
  CHECK(js["branes"][0]["coeffs"][2].is_array());
  CHECK(js["branes"][0]["coeffs"][2][0]["coeff"] == "1/4");

  std::vector<Rational> p{rat(2), rat(3)};
  ModuliSolution num = solve_named("A2", 3, SolveMode::numeric, p);
  nlohmann::json jn = num.to_json();
  CHECK(jn["mode"] == "numeric");
  // Numeric coefficients serialize as exact rational strings.
  CHECK(jn["branes"][0]["coeffs"][2] == "3/2");
}

TEST_CASE("solver arguments are validated") {
  QuasiCartanMatrix A = QuasiCartanMatrix::named("A2");
  CHECK_THROWS_AS(tb::solve_coefficients(A, 0, SolveMode::symbolic), tb::Error);
  CHECK_THROWS_AS(tb::solve_coefficients(A, 3, SolveMode::numeric), tb::Error);
  std::vector<Rational> one_value{rat(1)};
  CHECK_THROWS_AS(tb::solve_coefficients(A, 3, SolveMode::numeric, one_value), tb::Error);

  ModuliSolution sol = tb::solve_coefficients(A, 3, SolveMode::symbolic);
  CHECK_THROWS_AS(sol.brane_series(0, 4), tb::Error);
  CHECK_THROWS_AS(tb::residual_check(A, sol, 0), tb::Error);
  CHECK_THROWS_AS(tb::verify_conjecture(A, -1), tb::Error);
}
