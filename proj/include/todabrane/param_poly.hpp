#pragma once

#include <map>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "todabrane/rational.hpp"

namespace tb {

/// Exponent vector of a monomial: one non-negative power per parameter symbol.
using ExponentVec = std::vector<unsigned>;

/// Graded lexicographic order: lower total degree first, ties broken by the
/// exponent vector itself. This is the canonical term order used everywhere,
/// including serialization.
struct GradedLexLess {
  bool operator()(const ExponentVec& a, const ExponentVec& b) const {
    unsigned da = std::accumulate(a.begin(), a.end(), 0u);
    unsigned db = std::accumulate(b.begin(), b.end(), 0u);
    if (da != db) return da < db;
    return a < b;
  }
};

/// Sparse multivariate polynomial in the parameter symbols P_1..P_m over
/// exact rationals. The arity m is fixed at construction; mixing arities in
/// one operation is an error. Stored terms never have zero coefficients, so
/// two values are equal iff their term maps are equal.
class ParamPoly {
 public:
  using TermMap = std::map<ExponentVec, Rational, GradedLexLess>;

  /// The zero polynomial with the given number of parameter symbols.
  explicit ParamPoly(int arity = 0);

  static ParamPoly constant(int arity, Rational value);
  /// The lone symbol P_{index+1} (0-based index).
  static ParamPoly symbol(int arity, int index);
  static ParamPoly monomial(int arity, Rational coeff, ExponentVec exponents);

  int arity() const { return arity_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Value of a constant polynomial (zero polynomial gives 0).
  Rational constant_value() const;
  size_t term_count() const { return terms_.size(); }
  unsigned total_degree() const;

  const TermMap& terms() const { return terms_; }

  ParamPoly& operator+=(const ParamPoly& rhs);
  ParamPoly& operator-=(const ParamPoly& rhs);
  friend ParamPoly operator+(ParamPoly a, const ParamPoly& b) { return a += b; }
  friend ParamPoly operator-(ParamPoly a, const ParamPoly& b) { return a -= b; }
  friend ParamPoly operator*(const ParamPoly& a, const ParamPoly& b);
  ParamPoly operator-() const;

  ParamPoly scaled(const Rational& c) const;

  friend bool operator==(const ParamPoly& a, const ParamPoly& b) {
    return a.arity_ == b.arity_ && a.terms_ == b.terms_;
  }
  friend bool operator!=(const ParamPoly& a, const ParamPoly& b) { return !(a == b); }

  /// Substitutes a value for every symbol. `values` must have `arity()` entries.
  Rational eval(std::span<const Rational> values) const;

  /// Canonical JSON: a list of {"coeff": "num/den", "exps": [...]} objects in
  /// graded-lex order. The zero polynomial is the empty list.
  nlohmann::json to_json() const;
  static ParamPoly from_json(const nlohmann::json& j, int arity);

  /// Human-readable form like "1/4*P1*P2 + 1/36*P1^2*P2", for messages.
  std::string to_string() const;

 private:
  void add_term(const ExponentVec& exps, const Rational& coeff);
  void require_same_arity(const ParamPoly& other) const;

  int arity_;
  TermMap terms_;
};

}  // namespace tb
