#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "todabrane/brane_model.hpp"
#include "todabrane/toda.hpp"

namespace tb {

/// Flux-form descriptor for one brane. Electric branes carry the factor
/// -Q_s prod_{s'} H_{s'}^{-A_{ss'}} on rho drho ^ tau(I_s); magnetic branes
/// are the constant Q_s on tau(bar I_s). Only structured data is kept: the
/// power list, the wedge index list, and the charge.
struct FormDescriptor {
  int brane = 0;
  BraneKind kind = BraneKind::electric;
  std::optional<Rational> Q;  // exact charge when the model supplied Q
  Rational Q_squared;
  std::vector<Rational> h_powers;  // exponent of H_{s'}, electric only
  std::vector<int> wedge;          // 1-based block indices of the tau factor
  bool radial_wedge = false;       // rho drho wedge prefix (electric)
};

/// Exact exponent tables of the metric, scalar, and form ansatz. The metric
/// is
///
///   g = (prod_s H_s^{a_s}) { w drho^2 + (prod_s H_s^{-2 h_s}) rho^2 g^1
///                            + sum_{i>=2} (prod_s H_s^{-2 h_s d_{iI_s}}) g^i }
///
/// with a_s = 2 h_s d(I_s)/(D-2); block_exponents stores the net per-block
/// exponents with the overall factor folded in. M_1 couples to every brane
/// (no indicator) and carries the rho^2 prefactor.
struct SolutionProfile {
  int w = 1;
  int D = 0;
  int brane_count = 0;
  std::vector<int> block_dims;
  std::optional<std::string> m1_topology;
  std::vector<Rational> overall;                       // a_s, also the radial exponents
  std::vector<std::vector<Rational>> block_exponents;  // [block i][brane s]
  std::vector<std::vector<Rational>> scalar_exponents; // [alpha][s] = h_s chi_s lambda^alpha
  std::vector<FormDescriptor> forms;

  nlohmann::json to_json() const;
};

SolutionProfile build_profile(const BraneModel& model, std::span<const Brane> branes,
                              const BraneConstants& constants);
/// Computes the constants first; a model with no branes yields the empty
/// profile (pure product metric w drho^2 + rho^2 g^1 + sum g^i).
SolutionProfile build_profile(const BraneModel& model);

/// One evaluated grid point. Coefficients are the H-power products only:
/// the rho^2 prefactor on M_1 and the sign w on the radial term are
/// reported separately, so every coefficient is exactly 1 at rho = 0.
struct ProfilePoint {
  double rho = 0;
  double z = 0;  // rho^2
  std::vector<double> h_values;      // H_s(z)
  double radial_coeff = 1;           // prod H_s^{a_s}
  std::vector<double> block_coeffs;  // per block, overall factor included
  double m1_with_rho2 = 0;           // block_coeffs[0] * rho^2
  std::vector<double> scalars;       // exp(phi^alpha)
  std::vector<double> form_coeffs;   // electric: -Q prod H^{-A}; magnetic: Q

  nlohmann::json to_json() const;
};

/// Evaluates the profile at one radius. H_s(rho^2) is computed exactly from
/// the moduli polynomials, then raised to the rational exponents in floating
/// point (rational powers of rationals are generally irrational; exactness
/// ends here by design). `values` binds the P_s when sol is symbolic.
/// Throws NonPositiveModulus when some H_s(rho^2) <= 0.
ProfilePoint evaluate_profile(const SolutionProfile& profile, const ModuliSolution& sol,
                              const Rational& rho, std::span<const Rational> values = {});

struct CylindricalClass {
  bool fluxbrane = false;
  std::string label;        // "fluxbrane", "S-brane", or "generic flux-type"
  std::string description;
};

/// w = +1 with M_1 a circle is the composite fluxbrane family; w = -1 is
/// the S-brane branch; anything else is generic flux-type.
CylindricalClass cylindrical_specialization(const SolutionProfile& profile);

/// Smallest z in (0, z_max] where some H_s vanishes or turns negative,
/// located by scan plus exact-sign bisection to within `width`. nullopt when
/// every H_s stays positive on the interval. Evaluation is exact, so the
/// returned bracket midpoint is reliable even near tangential zeros.
std::optional<double> find_breakdown(const ModuliSolution& sol,
                                     std::span<const Rational> values, double z_max,
                                     double width = 1e-6);

}  // namespace tb
