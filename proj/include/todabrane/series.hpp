#pragma once

#include <span>
#include <vector>

#include "todabrane/param_poly.hpp"

namespace tb {

/// Truncated formal power series in z with ParamPoly coefficients.
///
/// A series of order N carries coefficients for z^0..z^N and asserts nothing
/// about higher powers. Binary operations take the tightest order that is
/// still valid: products and sums use min(N_a, N_b), the derivative drops one
/// order, multiplication by z gains one.
class Series {
 public:
  Series(int arity, int order);
  static Series one(int arity, int order);
  static Series from_coeffs(std::vector<ParamPoly> coeffs);

  int arity() const { return arity_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }

  const ParamPoly& coeff(int k) const;
  void set_coeff(int k, ParamPoly value);

  bool is_zero() const;
  /// Index of the highest nonzero coefficient, or -1 for the zero series.
  int degree() const;
  /// First index with a nonzero coefficient, or -1 for the zero series.
  int first_nonzero() const;

  friend Series operator+(const Series& a, const Series& b);
  friend Series operator-(const Series& a, const Series& b);
  friend Series operator*(const Series& a, const Series& b);

  Series scaled(const ParamPoly& c) const;
  Series scaled(const Rational& c) const;

  /// (1 + h)^alpha for any rational alpha, via the first-order recurrence
  /// obtained from s g' = alpha s' g. Requires a unit constant term.
  Series pow(const Rational& alpha) const;
  /// Non-negative integer power by repeated multiplication; no constraint on
  /// the constant term. Order is preserved.
  Series pow_int(unsigned e) const;

  /// Term-wise d/dz; the order drops by one (an order-0 input yields the
  /// order-0 zero series).
  Series derivative() const;
  /// Multiplication by z; the order grows by one.
  Series shifted_z() const;
  /// Copy truncated to min(new_order, order()).
  Series truncated(int new_order) const;

  /// Substitutes parameter values and evaluates at rational z. Exact.
  Rational eval(const Rational& z, std::span<const Rational> values) const;

  friend bool operator==(const Series& a, const Series& b) {
    return a.arity_ == b.arity_ && a.coeffs_ == b.coeffs_;
  }
  friend bool operator!=(const Series& a, const Series& b) { return !(a == b); }

  std::string to_string() const;

 private:
  void require_compatible(const Series& other) const;

  int arity_;
  std::vector<ParamPoly> coeffs_;  // index k holds the z^k coefficient
};

}  // namespace tb
