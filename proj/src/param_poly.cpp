#include "todabrane/param_poly.hpp"

#include <sstream>

namespace tb {

ParamPoly::ParamPoly(int arity) : arity_(arity) {
  if (arity < 0) fail(ErrorCode::invalid_argument, "negative arity");
}

ParamPoly ParamPoly::constant(int arity, Rational value) {
  ParamPoly p(arity);
  if (!value.is_zero()) p.terms_.emplace(ExponentVec(arity, 0), std::move(value));
  return p;
}

ParamPoly ParamPoly::symbol(int arity, int index) {
  if (index < 0 || index >= arity)
    fail(ErrorCode::invalid_argument, "symbol index out of range");
  ExponentVec e(arity, 0);
  e[index] = 1;
  ParamPoly p(arity);
  p.terms_.emplace(std::move(e), Rational(1));
  return p;
}

ParamPoly ParamPoly::monomial(int arity, Rational coeff, ExponentVec exponents) {
  if (static_cast<int>(exponents.size()) != arity)
    fail(ErrorCode::arity_mismatch, "exponent vector length does not match arity");
  ParamPoly p(arity);
  if (!coeff.is_zero()) p.terms_.emplace(std::move(exponents), std::move(coeff));
  return p;
}

bool ParamPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& e = terms_.begin()->first;
  for (unsigned x : e)
    if (x != 0) return false;
  return true;
}

Rational ParamPoly::constant_value() const {
  if (!is_constant())
    fail(ErrorCode::invalid_argument, "constant_value on non-constant " + to_string());
  return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

unsigned ParamPoly::total_degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) {
    unsigned t = std::accumulate(e.begin(), e.end(), 0u);
    if (t > d) d = t;
  }
  return d;
}

void ParamPoly::require_same_arity(const ParamPoly& other) const {
  if (arity_ != other.arity_)
    fail(ErrorCode::arity_mismatch, "polynomial arity mismatch: " +
                                        std::to_string(arity_) + " vs " +
                                        std::to_string(other.arity_));
}

void ParamPoly::add_term(const ExponentVec& exps, const Rational& coeff) {
  if (coeff.is_zero()) return;
  auto [it, inserted] = terms_.emplace(exps, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

ParamPoly& ParamPoly::operator+=(const ParamPoly& rhs) {
  require_same_arity(rhs);
  for (const auto& [e, c] : rhs.terms_) add_term(e, c);
  return *this;
}

ParamPoly& ParamPoly::operator-=(const ParamPoly& rhs) {
  require_same_arity(rhs);
  for (const auto& [e, c] : rhs.terms_) add_term(e, -c);
  return *this;
}

ParamPoly operator*(const ParamPoly& a, const ParamPoly& b) {
  a.require_same_arity(b);
  ParamPoly out(a.arity_);
  ExponentVec e(a.arity_, 0);
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      for (int i = 0; i < a.arity_; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  return out;
}

ParamPoly ParamPoly::operator-() const {
  ParamPoly out(arity_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

ParamPoly ParamPoly::scaled(const Rational& c) const {
  ParamPoly out(arity_);
  if (c.is_zero()) return out;
  for (const auto& [e, coeff] : terms_) out.terms_.emplace(e, coeff * c);
  return out;
}

Rational ParamPoly::eval(std::span<const Rational> values) const {
  if (static_cast<int>(values.size()) != arity_)
    fail(ErrorCode::arity_mismatch, "eval: expected " + std::to_string(arity_) +
                                        " values, got " + std::to_string(values.size()));
  Rational sum(0);
  for (const auto& [e, c] : terms_) {
    Rational term = c;
    for (int i = 0; i < arity_; ++i)
      if (e[i] != 0) term *= values[i].pow_int(static_cast<long>(e[i]));
    sum += term;
  }
  return sum;
}

nlohmann::json ParamPoly::to_json() const {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& [e, c] : terms_) {
    nlohmann::json term;
    term["coeff"] = c.to_string();
    term["exps"] = e;
    list.push_back(std::move(term));
  }
  return list;
}

ParamPoly ParamPoly::from_json(const nlohmann::json& j, int arity) {
  if (!j.is_array()) fail(ErrorCode::parse_error, "polynomial JSON must be a list");
  ParamPoly p(arity);
  for (const auto& term : j) {
    if (!term.is_object() || !term.contains("coeff") || !term.contains("exps"))
      fail(ErrorCode::parse_error, "polynomial term needs 'coeff' and 'exps'");
    ExponentVec e = term.at("exps").get<ExponentVec>();
    if (static_cast<int>(e.size()) != arity)
      fail(ErrorCode::parse_error, "exponent vector length does not match arity");
    p.add_term(e, Rational::from_string(term.at("coeff").get<std::string>()));
  }
  return p;
}

std::string ParamPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.to_string();
    for (int i = 0; i < arity_; ++i) {
      if (e[i] == 0) continue;
      os << "*P" << (i + 1);
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

}  // namespace tb
