#pragma once

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "todabrane/toda.hpp"

namespace tb {

struct OdeSettings {
  double rtol = 1e-10;
  double atol = 1e-12;
  double z0 = 1e-6;
  /// Series order used to seed (H_s(z0), H_s'(z0)); the start point is a
  /// regular singular point, so integration begins at z0 > 0 from truncated
  /// series data instead of at 0.
  int seed_order = 4;
};

struct OdeSample {
  double z = 0;
  std::vector<double> H;
};

struct OdeRun {
  std::vector<double> B;  // B_s = 4 P_s
  double z0 = 0;
  double z1 = 0;
  double rtol = 0;
  double atol = 0;
  std::vector<double> H_end;
  std::vector<double> Hp_end;
  size_t accepted = 0;
  size_t rejected = 0;
  /// max_s |H_s(z0) - (1 + P_s z0)|, the deviation of the seed from the
  /// leading boundary behavior.
  double seed_deviation = 0;
  std::vector<OdeSample> trajectory;  // accepted steps, including both ends

  nlohmann::json to_json() const;
};

/// Integrates the first-order system for (H_s, H_s') equivalent to
///
///   d/dz ( z H_s'/H_s ) = (1/4) B_s prod_{s'} H_{s'}^{-A_{ss'}},
///
/// i.e. H_s'' = (R_s H_s - H_s')/z + (H_s')^2/H_s, with a Dormand-Prince
/// 5(4) embedded pair and PI-free standard step control. Initial data comes
/// from the truncated series of `sol` (bound to `values` when symbolic)
/// evaluated at z0. Throws StepFailure when the controller stalls and
/// PositivityLoss when some H_s drops to or below zero.
OdeRun integrate_master_ode(const QuasiCartanMatrix& A, std::span<const Rational> B_s,
                            const ModuliSolution& sol, std::span<const Rational> values,
                            double z1, const OdeSettings& settings = {});

struct CrossValidationPoint {
  double z = 0;
  std::vector<double> ode;
  std::vector<double> exact;
  double rel_dev = 0;
};

struct CrossValidation {
  double max_rel_dev = 0;
  double tolerance = 0;
  bool pass = false;
  double z0 = 0;
  double z1 = 0;
  std::vector<CrossValidationPoint> points;

  nlohmann::json to_json() const;
};

/// Integrates once across the grid (ascending z values > z0) and compares
/// the trajectory against exact polynomial evaluation of `sol` at every
/// grid point. B_s = 4 P_s is taken from the solution's own first-order
/// coefficients, so the two routes share nothing beyond the parameters.
CrossValidation cross_validate(const ModuliSolution& sol, std::span<const Rational> values,
                               std::span<const double> z_grid, double tolerance,
                               const OdeSettings& settings = {});

}  // namespace tb
