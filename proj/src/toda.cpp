#include "todabrane/toda.hpp"

#include <algorithm>

#include "todabrane/threads.hpp"

namespace tb {

const char* solve_mode_name(SolveMode m) {
  return m == SolveMode::symbolic ? "symbolic" : "numeric";
}

Rational ModuliSolution::numeric_coeff(int brane, int k,
                                       std::span<const Rational> values) const {
  const ParamPoly& p = coeff(brane, k);
  if (mode == SolveMode::numeric) return p.constant_value();
  return p.eval(values);
}

Series ModuliSolution::brane_series(int brane, int order) const {
  if (order > this->order)
    fail(ErrorCode::invalid_argument, "requested order exceeds the solved order");
  std::vector<ParamPoly> c(coeffs.at(brane).begin(), coeffs.at(brane).begin() + order + 1);
  return Series::from_coeffs(std::move(c));
}

int ModuliSolution::brane_degree(int brane) const {
  const auto& c = coeffs.at(brane);
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
    if (!c[k].is_zero()) return k;
  return 0;
}

nlohmann::json ModuliSolution::to_json() const {
  nlohmann::json j;
  j["matrix"] = matrix.entries().to_json();
  j["order"] = order;
  j["mode"] = solve_mode_name(mode);
  nlohmann::json branes = nlohmann::json::array();
  for (int s = 0; s < brane_count(); ++s) {
    nlohmann::json entry;
    nlohmann::json list = nlohmann::json::array();
    for (const ParamPoly& c : coeffs[s]) {
      if (mode == SolveMode::numeric)
        list.push_back(c.constant_value().to_string());
      else
        list.push_back(c.to_json());
    }
    entry["coeffs"] = std::move(list);
    branes.push_back(std::move(entry));
  }
  j["branes"] = std::move(branes);
  return j;
}

namespace {

/// H^alpha dispatch: finite product for non-negative integer exponents,
/// rational-power recurrence otherwise.
Series series_power(const Series& base, const Rational& alpha) {
  if (alpha.is_integer() && alpha.sign() >= 0)
    return base.pow_int(static_cast<unsigned>(alpha.to_long()));
  return base.pow(alpha);
}

/// z H'' H + H' H - z (H')^2 for a single brane, valid to the order of H
/// minus one (the top coefficient of H'' is not determined by H's order).
/// Padding H with one extra zero coefficient makes the z^k coefficient
/// computable with P^{(k+1)} treated as 0.
Series cleared_lhs(const Series& H) {
  Series Hp = H.derivative();
  Series Hpp = Hp.derivative();
  return Hpp.shifted_z() * H + Hp * H - (Hp * Hp).shifted_z();
}

}  // namespace

Series build_rhs_series(const QuasiCartanMatrix& A, std::span<const Series> H, int brane) {
  if (static_cast<int>(H.size()) != A.rank())
    fail(ErrorCode::invalid_argument, "one series per brane required");
  if (brane < 0 || brane >= A.rank())
    fail(ErrorCode::invalid_argument, "brane index out of range");
  int order = H[0].order();
  for (const Series& h : H) order = std::min(order, h.order());
  Series prod = Series::one(H[0].arity(), order);
  for (int t = 0; t < A.rank(); ++t)
    prod = prod * H[t].pow(-A.at(brane, t));
  return prod;
}

Series build_rhs_pruned(const QuasiCartanMatrix& A, std::span<const Series> H, int brane) {
  if (static_cast<int>(H.size()) != A.rank())
    fail(ErrorCode::invalid_argument, "one series per brane required");
  int order = H[0].order();
  for (const Series& h : H) order = std::min(order, h.order());
  Series prod = Series::one(H[0].arity(), order);
  for (int t = 0; t < A.rank(); ++t) {
    if (t == brane) continue;
    prod = prod * series_power(H[t], -A.at(brane, t));
  }
  return prod;
}

ModuliSolution solve_coefficients(const QuasiCartanMatrix& A, int order, SolveMode mode,
                                  std::span<const Rational> values) {
  if (order < 1) fail(ErrorCode::invalid_argument, "order must be >= 1");
  const int m = A.rank();
  if (mode == SolveMode::numeric && static_cast<int>(values.size()) != m)
    fail(ErrorCode::invalid_argument, "numeric mode needs one P value per brane");

  ModuliSolution sol{A, order, mode, {}, {}};
  const int arity = sol.arity();
  if (mode == SolveMode::numeric) sol.values.assign(values.begin(), values.end());

  // P_s^{(0)} = 1 from the boundary condition; P_s^{(1)} is the parameter
  // itself (B_s = 4 P_s makes the z^0 relation an identity).
  sol.coeffs.assign(m, {});
  std::vector<ParamPoly> P1;
  for (int s = 0; s < m; ++s) {
    ParamPoly p1 = mode == SolveMode::symbolic ? ParamPoly::symbol(arity, s)
                                               : ParamPoly::constant(0, values[s]);
    sol.coeffs[s].push_back(ParamPoly::constant(arity, Rational(1)));
    sol.coeffs[s].push_back(p1);
    P1.push_back(std::move(p1));
  }

  std::vector<ParamPoly> next(m, ParamPoly(arity));
  for (int k = 1; k < order; ++k) {
    // All data of order <= k is in place; the z^k relation yields P^{(k+1)}.
    std::vector<Series> H;
    H.reserve(m);
    for (int s = 0; s < m; ++s) H.push_back(sol.brane_series(s, k));

    threads::parallel_for(m, [&](int s) {
      ParamPoly rhs_k = P1[s] * build_rhs_pruned(A, H, s).coeff(k);
      // Pad with a zero z^{k+1} coefficient so the cleared LHS is valid at
      // z^k; the padded term contributes exactly (k+1)^2 P^{(k+1)}, which is
      // the unknown being solved for.
      std::vector<ParamPoly> padded(sol.coeffs[s]);
      padded.push_back(ParamPoly(arity));
      ParamPoly lhs_k = cleared_lhs(Series::from_coeffs(std::move(padded))).coeff(k);
      next[s] = (rhs_k - lhs_k).scaled(Rational(1, static_cast<long>(k + 1) * (k + 1)));
    });
    for (int s = 0; s < m; ++s) sol.coeffs[s].push_back(next[s]);
  }
  return sol;
}

bool ResidualResult::all_zero() const {
  return std::all_of(residuals.begin(), residuals.end(),
                     [](const Series& s) { return s.is_zero(); });
}

ResidualResult residual_check(const QuasiCartanMatrix& A, const ModuliSolution& sol,
                              int check_order, ResidualPath path) {
  const int m = A.rank();
  if (sol.brane_count() != m)
    fail(ErrorCode::invalid_argument, "solution and matrix brane counts differ");
  if (check_order < 1) fail(ErrorCode::invalid_argument, "check order must be >= 1");

  bool poly_ok = A.off_diagonal_nonpositive_integers();
  if (poly_ok)
    for (int s = 0; s < m; ++s)
      if (sol.brane_degree(s) >= sol.order) poly_ok = false;  // no trailing zero: not a finite polynomial

  bool use_poly = path == ResidualPath::exact_polynomial ||
                  (path == ResidualPath::automatic && poly_ok);
  if (path == ResidualPath::exact_polynomial && !poly_ok)
    fail(ErrorCode::invalid_argument,
         "exact polynomial residual needs non-positive integer couplings and a "
         "finite polynomial solution");

  ResidualResult result;
  result.polynomial_path = use_poly;
  result.residuals.reserve(m);

  if (use_poly) {
    // Treat each H_s as the complete polynomial it is and verify the cleared
    // identity with no truncation: pick per-brane orders beyond every degree
    // that can appear on either side.
    std::vector<int> deg(m);
    for (int s = 0; s < m; ++s) deg[s] = sol.brane_degree(s);
    std::vector<ParamPoly> P1;
    for (int s = 0; s < m; ++s) P1.push_back(sol.coeff(s, std::min(1, sol.order)));
    for (int s = 0; s < m; ++s) {
      long rhs_deg = 0;
      for (int t = 0; t < m; ++t) {
        if (t == s) continue;
        rhs_deg += (-A.at(s, t)).to_long() * deg[t];
      }
      int full = static_cast<int>(std::max<long>(2 * deg[s], rhs_deg)) + 1;
      std::vector<Series> H;
      for (int t = 0; t < m; ++t) {
        std::vector<ParamPoly> c(sol.coeffs[t].begin(), sol.coeffs[t].begin() + deg[t] + 1);
        c.resize(full + 1, ParamPoly(sol.arity()));
        H.push_back(Series::from_coeffs(std::move(c)));
      }
      Series rhs = build_rhs_pruned(A, H, s).scaled(P1[s]);
      result.residuals.push_back(cleared_lhs(H[s]).truncated(full - 1) - rhs.truncated(full - 1));
    }
    return result;
  }

  const int n = std::min(check_order, sol.order - 1);
  std::vector<Series> H;
  for (int s = 0; s < m; ++s) H.push_back(sol.brane_series(s, std::min(n + 1, sol.order)));
  for (int s = 0; s < m; ++s) {
    Series rhs_full = build_rhs_series(A, H, s);
    Series rhs = (H[s] * H[s] * rhs_full).scaled(sol.coeff(s, 1));
    result.residuals.push_back((cleared_lhs(H[s]) - rhs).truncated(n));
  }
  return result;
}

std::string verdict_string(ConjectureVerdict v, int violation_order) {
  switch (v) {
    case ConjectureVerdict::polynomial_confirmed: return "polynomial-confirmed";
    case ConjectureVerdict::degrees_undefined: return "degrees-undefined";
    case ConjectureVerdict::violation:
      return "violation-at-order-" + std::to_string(violation_order);
  }
  return "unknown";
}

bool ConjectureReport::confirmed() const {
  return degrees_defined &&
         std::all_of(branes.begin(), branes.end(), [](const BraneConjecture& b) {
           return b.verdict == ConjectureVerdict::polynomial_confirmed;
         });
}

nlohmann::json ConjectureReport::to_json() const {
  nlohmann::json j;
  j["algebra"] = algebra ? nlohmann::json(*algebra) : nlohmann::json(nullptr);
  j["degrees_defined"] = degrees_defined;
  if (!note.empty()) j["note"] = note;
  nlohmann::json list = nlohmann::json::array();
  for (const auto& b : branes) {
    nlohmann::json e;
    e["degree"] = b.degree ? nlohmann::json(b.degree->to_string()) : nlohmann::json(nullptr);
    e["verdict"] = verdict_string(b.verdict, b.violation_order);
    if (b.verdict != ConjectureVerdict::degrees_undefined) {
      e["checked_from"] = b.checked_from;
      e["checked_to"] = b.checked_to;
    }
    if (b.verdict == ConjectureVerdict::violation) {
      e["violation_order"] = b.violation_order;
      e["first_nonzero"] = b.first_nonzero->to_json();
    }
    list.push_back(std::move(e));
  }
  j["branes"] = std::move(list);
  return j;
}

ConjectureReport verify_conjecture(const QuasiCartanMatrix& A, int margin) {
  if (margin < 0) fail(ErrorCode::invalid_argument, "margin must be >= 0");
  ConjectureReport report;
  report.algebra = A.classify();

  std::vector<Rational> degrees;
  try {
    degrees = weyl_degrees(A);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::singular_matrix) throw;
    report.note = "singular matrix (det = 0)";
    report.branes.assign(A.rank(), BraneConjecture{});
    return report;
  }

  bool integral = true;
  for (const Rational& d : degrees)
    if (!d.is_integer() || d.sign() <= 0) integral = false;
  if (!integral) {
    report.note = "conjectured degrees are not all positive integers";
    for (const Rational& d : degrees) {
      BraneConjecture b;
      b.degree = d;
      report.branes.push_back(std::move(b));
    }
    return report;
  }

  report.degrees_defined = true;
  long max_degree = 0;
  for (const Rational& d : degrees) max_degree = std::max(max_degree, d.to_long());
  const int order = static_cast<int>(max_degree) + std::max(margin, 1);

  ModuliSolution sol = solve_coefficients(A, order, SolveMode::symbolic);
  for (int s = 0; s < A.rank(); ++s) {
    BraneConjecture b;
    b.degree = degrees[s];
    const int n_s = static_cast<int>(degrees[s].to_long());
    b.checked_from = n_s + 1;
    b.checked_to = order;
    b.verdict = ConjectureVerdict::polynomial_confirmed;
    for (int k = n_s + 1; k <= order; ++k) {
      if (!sol.coeff(s, k).is_zero()) {
        b.verdict = ConjectureVerdict::violation;
        b.violation_order = k;
        b.first_nonzero = sol.coeff(s, k);
        break;
      }
    }
    report.branes.push_back(std::move(b));
  }
  report.solution = std::move(sol);
  return report;
}

}  // namespace tb
