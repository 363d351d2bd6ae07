#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "todabrane/cartan.hpp"
#include "todabrane/rational_matrix.hpp"

namespace tb {

/// One Ricci-flat block M_i of the product manifold, abstracted to its
/// dimension and orientation sign. Ricci-flatness is declared, not checked:
/// the solution constants depend only on (dim, eps). The optional topology
/// tag ("circle" or "line") is only consulted for M_1 when classifying
/// cylindrically symmetric profiles.
struct FactorSpace {
  int dim = 1;
  int eps = 1;
  std::optional<std::string> topology;
};

struct FormField {
  std::string name;
  int rank = 0;   // N_a
  int theta = 1;  // theta_a = +-1
};

/// Scalar-field sector: symmetric invertible target-space metric h_{ab} and
/// one coupling vector per form. Forms without an entry couple trivially.
struct ScalarSector {
  RationalMatrix h{0, 0};
  std::map<std::string, std::vector<Rational>> lambda;

  int count() const { return h.rows(); }
  /// Coupling vector for a form, zero-filled when absent.
  std::vector<Rational> coupling(const std::string& form) const;
};

enum class BraneKind { electric, magnetic };

const char* brane_kind_name(BraneKind k);

struct Brane {
  std::string form;
  BraneKind kind = BraneKind::electric;
  std::vector<int> I;            // 1-based factor-space indices, sorted, distinct
  Rational Q_squared;            // only Q^2 enters the constants; always > 0
  std::optional<Rational> Q;     // kept when the model supplied the charge itself

  int chi() const { return kind == BraneKind::electric ? 1 : -1; }
};

/// Declarative model: product manifold blocks, form fields, scalar sector,
/// metric signature sign eps_g = sign det(g), branch sign w, and the brane
/// list. Total dimension D = 1 + sum d_i (the radial direction plus the
/// blocks); the first block M_1 must be one-dimensional.
struct BraneModel {
  std::vector<FactorSpace> factor_spaces;
  std::vector<FormField> forms;
  ScalarSector scalars;
  int eps_g = -1;
  int w = 1;
  std::vector<Brane> branes;

  int block_count() const { return static_cast<int>(factor_spaces.size()); }
  int D() const;
  /// d(I) = sum of d_i over i in I.
  int dim_of(std::span<const int> I) const;
  /// prod_{i in I} eps_i.
  int eps_of(std::span<const int> I) const;
  const FormField& form_of(const Brane& b) const;
  /// Worldvolume dimension forced by the form rank: N_a - 1 for electric,
  /// D - N_a - 1 for magnetic.
  int required_worldvolume_dim(const Brane& b) const;

  /// Strict parse: unknown keys, malformed values, out-of-range indices,
  /// d_1 != 1, non-symmetric h, and zero charges are all hard errors.
  static BraneModel from_json(const nlohmann::json& j);
  static BraneModel from_file(const std::string& path);
  nlohmann::json to_json() const;
};

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;

  bool all_passed() const;
  nlohmann::json to_json() const;
};

/// Per-brane solution constants plus the coupling matrices.
struct BraneConstants {
  RationalMatrix B;      // B_{ss'}
  QuasiCartanMatrix A;   // 2 B_{ss'} / B_{s's'}
  std::vector<int> eps;  // eps_s
  std::vector<Rational> K;   // K_s = B_ss
  std::vector<Rational> h;   // h_s = 1/K_s
  std::vector<Rational> Bs;  // B_s = eps_s K_s Q_s^2
  std::vector<Rational> P;   // P_s = B_s / 4

  nlohmann::json to_json() const;
};

/// B_{ss'} = d(I_s cap I_s') + d(I_s) d(I_s') / (2 - D)
///           + chi_s chi_s' lambda_s . lambda_s'
/// with the dot product taken in the inverse scalar metric h^{ab}.
/// Throws SingularScalarMetric when h is not invertible.
RationalMatrix compute_B_matrix(const BraneModel& model, std::span<const Brane> branes);
RationalMatrix compute_B_matrix(const BraneModel& model);

/// A_{ss'} = 2 B_{ss'} / B_{s's'}. Throws ZeroDiagonal when some B_{s's'} = 0.
QuasiCartanMatrix compute_quasi_cartan(const RationalMatrix& B);

BraneConstants compute_brane_constants(const BraneModel& model, std::span<const Brane> branes);
BraneConstants compute_brane_constants(const BraneModel& model);

/// Report-based admissibility checks: the worldvolume-dimension rule, R1
/// (same form and kind: d(I cap J) <= d(I) - 2), R2 (electric/magnetic pair
/// of one form: d(I cap J) != 0), invertibility of the scalar metric, B_ss
/// != 0, det B != 0, and the eps_s > 0, K_s > 0 sign conditions. Never
/// throws; every finding is a pass/fail entry.
ValidationReport validate_model(const BraneModel& model, std::span<const Brane> branes);
ValidationReport validate_model(const BraneModel& model);

struct IntersectionEntry {
  int s = 0;
  int t = 0;       // pair s < t, 0-based brane indices
  long d = 0;      // forced d(I_s cap I_t)
  std::string note;
};

struct IntersectionDims {
  std::vector<IntersectionEntry> entries;
  nlohmann::json to_json() const;
};

/// Inverts the coupling formula pairwise: given the target quasi-Cartan
/// matrix and everything in the model except the intersections, solves
///
///   A_{ss'} B_{s's'} / 2 = d(I cap J) + d(I_s) d(I_s') / (2 - D)
///                          + chi chi' lambda . lambda'
///
/// for d(I cap J). The (s,s') and (s',s) equations must force the same
/// value (throws Inconsistent otherwise, the target's asymmetry being
/// incompatible with the fixed diagonal), and it must be a non-negative
/// integer (throws NoIntegerSolution). A zero intersection with one
/// electric and one magnetic brane of the same form is returned but noted
/// as an R2 conflict.
IntersectionDims solve_intersection_dims(const BraneModel& model, std::span<const Brane> branes,
                                         const QuasiCartanMatrix& target);
IntersectionDims solve_intersection_dims(const BraneModel& model,
                                         const QuasiCartanMatrix& target);

}  // namespace tb
