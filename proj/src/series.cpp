#include "todabrane/series.hpp"

#include <algorithm>
#include <sstream>

namespace tb {

Series::Series(int arity, int order) : arity_(arity) {
  if (order < 0) fail(ErrorCode::invalid_argument, "series order must be >= 0");
  coeffs_.assign(order + 1, ParamPoly(arity));
}

Series Series::one(int arity, int order) {
  Series s(arity, order);
  s.coeffs_[0] = ParamPoly::constant(arity, Rational(1));
  return s;
}

Series Series::from_coeffs(std::vector<ParamPoly> coeffs) {
  if (coeffs.empty()) fail(ErrorCode::invalid_argument, "series needs at least the z^0 coefficient");
  Series s(coeffs.front().arity(), static_cast<int>(coeffs.size()) - 1);
  for (auto& c : coeffs)
    if (c.arity() != s.arity_) fail(ErrorCode::arity_mismatch, "mixed arities in series coefficients");
  s.coeffs_ = std::move(coeffs);
  return s;
}

const ParamPoly& Series::coeff(int k) const {
  if (k < 0 || k > order())
    fail(ErrorCode::invalid_argument, "coefficient index " + std::to_string(k) +
                                          " outside order " + std::to_string(order()));
  return coeffs_[k];
}

void Series::set_coeff(int k, ParamPoly value) {
  if (k < 0 || k > order())
    fail(ErrorCode::invalid_argument, "coefficient index out of range");
  if (value.arity() != arity_) fail(ErrorCode::arity_mismatch, "coefficient arity mismatch");
  coeffs_[k] = std::move(value);
}

bool Series::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const ParamPoly& p) { return p.is_zero(); });
}

int Series::degree() const {
  for (int k = order(); k >= 0; --k)
    if (!coeffs_[k].is_zero()) return k;
  return -1;
}

int Series::first_nonzero() const {
  for (int k = 0; k <= order(); ++k)
    if (!coeffs_[k].is_zero()) return k;
  return -1;
}

void Series::require_compatible(const Series& other) const {
  if (arity_ != other.arity_) fail(ErrorCode::arity_mismatch, "series arity mismatch");
}

Series operator+(const Series& a, const Series& b) {
  a.require_compatible(b);
  Series out(a.arity_, std::min(a.order(), b.order()));
  for (int k = 0; k <= out.order(); ++k) out.coeffs_[k] = a.coeffs_[k] + b.coeffs_[k];
  return out;
}

Series operator-(const Series& a, const Series& b) {
  a.require_compatible(b);
  Series out(a.arity_, std::min(a.order(), b.order()));
  for (int k = 0; k <= out.order(); ++k) out.coeffs_[k] = a.coeffs_[k] - b.coeffs_[k];
  return out;
}

Series operator*(const Series& a, const Series& b) {
  a.require_compatible(b);
  Series out(a.arity_, std::min(a.order(), b.order()));
  for (int i = 0; i <= std::min(a.order(), out.order()); ++i) {
    if (a.coeffs_[i].is_zero()) continue;
    int jmax = std::min(b.order(), out.order() - i);
    for (int j = 0; j <= jmax; ++j) {
      if (b.coeffs_[j].is_zero()) continue;
      out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
  }
  return out;
}

Series Series::scaled(const ParamPoly& c) const {
  if (c.arity() != arity_) fail(ErrorCode::arity_mismatch, "scale factor arity mismatch");
  Series out(arity_, order());
  for (int k = 0; k <= order(); ++k) out.coeffs_[k] = coeffs_[k] * c;
  return out;
}

Series Series::scaled(const Rational& c) const {
  Series out(arity_, order());
  for (int k = 0; k <= order(); ++k) out.coeffs_[k] = coeffs_[k].scaled(c);
  return out;
}

Series Series::pow(const Rational& alpha) const {
  if (!(coeffs_[0] == ParamPoly::constant(arity_, Rational(1))))
    fail(ErrorCode::invalid_argument,
         "series_pow requires a unit constant term, got " + coeffs_[0].to_string());
  const int n = order();
  Series out = Series::one(arity_, n);
  // From g = s^alpha and s g' = alpha s' g:
  //   m b_m = sum_{i=1..m} ((alpha + 1) i - m) a_i b_{m-i}.
  // Never divides by anything except the integer m, so it stays exact for
  // ParamPoly coefficients and arbitrary rational alpha.
  for (int m = 1; m <= n; ++m) {
    ParamPoly acc(arity_);
    for (int i = 1; i <= m; ++i) {
      if (coeffs_[i].is_zero()) continue;
      Rational factor = (alpha + Rational(1)) * Rational(i) - Rational(m);
      if (factor.is_zero()) continue;
      acc += (coeffs_[i] * out.coeffs_[m - i]).scaled(factor);
    }
    out.coeffs_[m] = acc.scaled(Rational(1, m));
  }
  return out;
}

Series Series::pow_int(unsigned e) const {
  Series result = Series::one(arity_, order());
  Series base = *this;
  while (e > 0) {
    if (e & 1u) result = result * base;
    e >>= 1u;
    if (e > 0) base = base * base;
  }
  return result;
}

Series Series::derivative() const {
  if (order() == 0) return Series(arity_, 0);
  Series out(arity_, order() - 1);
  for (int k = 1; k <= order(); ++k)
    out.coeffs_[k - 1] = coeffs_[k].scaled(Rational(k));
  return out;
}

Series Series::shifted_z() const {
  Series out(arity_, order() + 1);
  for (int k = 0; k <= order(); ++k) out.coeffs_[k + 1] = coeffs_[k];
  return out;
}

Series Series::truncated(int new_order) const {
  if (new_order < 0) fail(ErrorCode::invalid_argument, "truncation order must be >= 0");
  if (new_order >= order()) return *this;
  Series out(arity_, new_order);
  for (int k = 0; k <= new_order; ++k) out.coeffs_[k] = coeffs_[k];
  return out;
}

Rational Series::eval(const Rational& z, std::span<const Rational> values) const {
  // Horner over the exact coefficients.
  Rational acc(0);
  for (int k = order(); k >= 0; --k) acc = acc * z + coeffs_[k].eval(values);
  return acc;
}

std::string Series::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (int k = 0; k <= order(); ++k) {
    if (coeffs_[k].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << coeffs_[k].to_string() << ")";
    if (k == 1) os << "*z";
    if (k > 1) os << "*z^" << k;
  }
  if (first) os << "0";
  os << " + O(z^" << order() + 1 << ")";
  return os.str();
}

}  // namespace tb
