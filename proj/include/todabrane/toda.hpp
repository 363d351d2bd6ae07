#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "todabrane/cartan.hpp"
#include "todabrane/series.hpp"

namespace tb {

enum class SolveMode { symbolic, numeric };

/// Power-series solution of the master equations
///
///   d/dz ( z H_s'/H_s ) = (1/4) B_s prod_{s'} H_{s'}^{-A_{ss'}},   H_s(+0) = 1,
///
/// with B_s = 4 P_s. In symbolic mode each P_s stays a free symbol and the
/// coefficients are ParamPoly values in P_1..P_m; in numeric mode the P_s are
/// bound to rationals and the coefficients are exact constants.
struct ModuliSolution {
  QuasiCartanMatrix matrix;
  int order = 0;
  SolveMode mode = SolveMode::symbolic;
  /// coeffs[s][k] is P_s^{(k)}; coeffs[s][0] == 1 and, symbolically,
  /// coeffs[s][1] == P_{s+1}.
  std::vector<std::vector<ParamPoly>> coeffs;
  /// Bound parameter values (numeric mode only).
  std::vector<Rational> values;

  int brane_count() const { return matrix.rank(); }
  int arity() const { return mode == SolveMode::symbolic ? matrix.rank() : 0; }
  const ParamPoly& coeff(int brane, int k) const { return coeffs.at(brane).at(k); }
  /// Coefficient as a number: the bound constant in numeric mode (pass no
  /// values), a substitution in symbolic mode (pass one value per brane).
  Rational numeric_coeff(int brane, int k, std::span<const Rational> values = {}) const;
  /// H_s as a series truncated at `order` (<= this->order).
  Series brane_series(int brane, int order) const;
  /// Index of the last nonzero coefficient of H_s (0 for H_s == 1).
  int brane_degree(int brane) const;

  nlohmann::json to_json() const;
};

/// prod_{s'} H_{s'}^{-A_{ss'}}: the full right-hand-side product of the
/// master equation for brane s, including the s' = s factor, computed with
/// the rational-power recurrence. All H_{s'} must have unit constant term.
Series build_rhs_series(const QuasiCartanMatrix& A, std::span<const Series> H, int brane);

/// Same product restricted to s' != s. Because A_ss = 2, it equals
/// H_s^2 * build_rhs_series(A, H, s) as a formal series; when every
/// off-diagonal entry is a non-positive integer it is a finite polynomial
/// product and is computed by repeated multiplication.
Series build_rhs_pruned(const QuasiCartanMatrix& A, std::span<const Series> H, int brane);

/// Solves the master equations order by order. The z^k relation of the
/// cleared form
///
///   z H_s'' H_s + H_s' H_s - z (H_s')^2 = P_s H_s^2 prod H_{s'}^{-A_{ss'}}
///
/// determines P_s^{(k+1)} with leading factor (k+1)^2, so the recurrence is
/// explicit and unique. Requires order >= 1; numeric mode needs one value
/// per brane.
ModuliSolution solve_coefficients(const QuasiCartanMatrix& A, int order, SolveMode mode,
                                  std::span<const Rational> values = {});

enum class ResidualPath { automatic, exact_polynomial, truncated_series };

struct ResidualResult {
  /// LHS - RHS of the cleared master equation, one series per brane.
  std::vector<Series> residuals;
  /// True when the finite-polynomial identity path was used (no truncation).
  bool polynomial_path = false;
  bool all_zero() const;
};

/// Residual of a solution. With ResidualPath::automatic the exact polynomial
/// path is taken when every off-diagonal entry of A is a non-positive integer
/// and every brane's coefficient list ends in a zero (i.e. the solution is a
/// finite polynomial); otherwise the series path checks orders 0..min(N,
/// sol.order - 1); the z^k relation involves P^{(k+1)}, so one order is
/// always lost to truncation.
ResidualResult residual_check(const QuasiCartanMatrix& A, const ModuliSolution& sol,
                              int check_order, ResidualPath path = ResidualPath::automatic);

enum class ConjectureVerdict { polynomial_confirmed, violation, degrees_undefined };

std::string verdict_string(ConjectureVerdict v, int violation_order = -1);

struct BraneConjecture {
  std::optional<Rational> degree;  // n_s, exact; nullopt when A is singular
  int checked_from = 0;            // first order beyond n_s that was checked
  int checked_to = 0;              // last order checked
  ConjectureVerdict verdict = ConjectureVerdict::degrees_undefined;
  int violation_order = -1;                 // for violations
  std::optional<ParamPoly> first_nonzero;   // coefficient at violation_order
};

struct ConjectureReport {
  std::optional<std::string> algebra;  // rank-2 label when recognized
  bool degrees_defined = false;        // all n_s are positive integers
  std::string note;                    // e.g. "singular matrix (det = 0)"
  std::vector<BraneConjecture> branes;
  /// The symbolic solution computed for the check (when degrees are defined).
  std::optional<ModuliSolution> solution;

  bool confirmed() const;
  nlohmann::json to_json() const;
};

/// Solves symbolically to max(n_s) + margin and reports whether every
/// coefficient beyond each n_s vanishes identically in the parameters:
/// a statement for all values of P_s, not a spot check. Matrices with
/// singular A or with some n_s not a positive integer get the
/// degrees-undefined verdict instead of an error.
ConjectureReport verify_conjecture(const QuasiCartanMatrix& A, int margin = 4);

const char* solve_mode_name(SolveMode m);

}  // namespace tb
