#include "todabrane/profile.hpp"

#include <algorithm>
#include <cmath>

namespace tb {

SolutionProfile build_profile(const BraneModel& model, std::span<const Brane> branes,
                              const BraneConstants& constants) {
  const int m = static_cast<int>(branes.size());
  const int n = model.block_count();

  SolutionProfile p;
  p.w = model.w;
  p.D = model.D();
  p.brane_count = m;
  for (const FactorSpace& f : model.factor_spaces) p.block_dims.push_back(f.dim);
  p.m1_topology = model.factor_spaces[0].topology;

  const Rational d_minus_2(p.D - 2);
  for (int s = 0; s < m; ++s)
    p.overall.push_back(Rational(2) * constants.h[s] * Rational(model.dim_of(branes[s].I)) /
                        d_minus_2);

  p.block_exponents.assign(n, {});
  for (int i = 0; i < n; ++i)
    for (int s = 0; s < m; ++s) {
      Rational e = p.overall[s];
      // M_1 couples to every brane; the other blocks only to branes whose
      // worldvolume contains them.
      bool on_worldvolume =
          i == 0 || std::binary_search(branes[s].I.begin(), branes[s].I.end(), i + 1);
      if (on_worldvolume) e -= Rational(2) * constants.h[s];
      p.block_exponents[i].push_back(std::move(e));
    }

  const int l = model.scalars.count();
  if (l > 0) {
    auto h_inv = model.scalars.h.inverse();
    if (!h_inv) fail(ErrorCode::singular_scalar_metric, "scalar metric h is not invertible");
    p.scalar_exponents.assign(l, {});
    for (int alpha = 0; alpha < l; ++alpha)
      for (int s = 0; s < m; ++s) {
        std::vector<Rational> lam = model.scalars.coupling(branes[s].form);
        Rational raised(0);  // lambda^alpha = h^{alpha beta} lambda_beta
        for (int beta = 0; beta < l; ++beta) raised += h_inv->at(alpha, beta) * lam[beta];
        p.scalar_exponents[alpha].push_back(constants.h[s] * Rational(branes[s].chi()) *
                                            raised);
      }
  }

  for (int s = 0; s < m; ++s) {
    FormDescriptor f;
    f.brane = s;
    f.kind = branes[s].kind;
    f.Q = branes[s].Q;
    f.Q_squared = branes[s].Q_squared;
    if (branes[s].kind == BraneKind::electric) {
      for (int t = 0; t < m; ++t) f.h_powers.push_back(-constants.A.at(s, t));
      f.wedge = branes[s].I;
      f.radial_wedge = true;
    } else {
      for (int i = 1; i <= n; ++i)
        if (!std::binary_search(branes[s].I.begin(), branes[s].I.end(), i))
          f.wedge.push_back(i);
    }
    p.forms.push_back(std::move(f));
  }
  return p;
}

SolutionProfile build_profile(const BraneModel& model) {
  if (model.branes.empty()) {
    SolutionProfile p;
    p.w = model.w;
    p.D = model.D();
    for (const FactorSpace& f : model.factor_spaces) p.block_dims.push_back(f.dim);
    p.m1_topology = model.factor_spaces[0].topology;
    p.block_exponents.assign(model.block_count(), {});
    return p;
  }
  return build_profile(model, model.branes, compute_brane_constants(model));
}

namespace {

nlohmann::json exponent_list(const std::vector<Rational>& v) {
  nlohmann::json j = nlohmann::json::array();
  for (const Rational& e : v) j.push_back(e.to_string());
  return j;
}

}  // namespace

nlohmann::json SolutionProfile::to_json() const {
  nlohmann::json j;
  j["w"] = w;
  j["D"] = D;
  if (m1_topology) j["m1_topology"] = *m1_topology;
  j["radial"] = {{"sign", w}, {"exponents", exponent_list(overall)}};
  j["blocks"] = nlohmann::json::array();
  for (size_t i = 0; i < block_exponents.size(); ++i) {
    nlohmann::json b;
    b["index"] = i + 1;
    b["dim"] = block_dims[i];
    if (i == 0) b["rho2_prefactor"] = true;
    b["exponents"] = exponent_list(block_exponents[i]);
    j["blocks"].push_back(std::move(b));
  }
  j["scalars"] = nlohmann::json::array();
  for (const auto& row : scalar_exponents) j["scalars"].push_back(exponent_list(row));
  j["forms"] = nlohmann::json::array();
  for (const FormDescriptor& f : forms) {
    nlohmann::json fj;
    fj["brane"] = f.brane + 1;
    fj["kind"] = brane_kind_name(f.kind);
    if (f.Q) fj["Q"] = f.Q->to_string();
    fj["Q2"] = f.Q_squared.to_string();
    if (f.kind == BraneKind::electric) fj["h_powers"] = exponent_list(f.h_powers);
    fj["wedge"] = f.wedge;
    fj["radial_wedge"] = f.radial_wedge;
    j["forms"].push_back(std::move(fj));
  }
  return j;
}

nlohmann::json ProfilePoint::to_json() const {
  nlohmann::json j;
  j["rho"] = rho;
  j["z"] = z;
  j["H"] = h_values;
  j["radial_coeff"] = radial_coeff;
  j["block_coeffs"] = block_coeffs;
  j["m1_with_rho2"] = m1_with_rho2;
  j["scalars"] = scalars;
  j["form_coeffs"] = form_coeffs;
  return j;
}

namespace {

double power_product(std::span<const double> h, const std::vector<Rational>& exponents) {
  double acc = 0;  // log-space accumulation
  for (size_t s = 0; s < exponents.size(); ++s)
    acc += exponents[s].to_double() * std::log(h[s]);
  return std::exp(acc);
}

}  // namespace

ProfilePoint evaluate_profile(const SolutionProfile& profile, const ModuliSolution& sol,
                              const Rational& rho, std::span<const Rational> values) {
  const int m = profile.brane_count;
  if (sol.brane_count() != m)
    fail(ErrorCode::invalid_argument, "profile and solution brane counts differ");
  // Numeric-mode coefficients are bound constants already (arity 0).
  std::span<const Rational> bind = sol.mode == SolveMode::numeric ? std::span<const Rational>{}
                                                                  : values;
  if (static_cast<int>(bind.size()) != sol.arity())
    fail(ErrorCode::invalid_argument, "parameter values required for a symbolic solution");

  const Rational z = rho * rho;
  std::vector<Rational> h_exact;
  std::vector<double> h;
  for (int s = 0; s < m; ++s) {
    Rational v = sol.brane_series(s, sol.order).eval(z, bind);
    if (v.sign() <= 0)
      fail(ErrorCode::non_positive_modulus,
           "H_" + std::to_string(s + 1) + "(" + z.to_string() + ") = " + v.to_string() +
               " <= 0: solution breakdown");
    h.push_back(v.to_double());
    h_exact.push_back(std::move(v));
  }

  ProfilePoint pt;
  pt.rho = rho.to_double();
  pt.z = z.to_double();
  pt.h_values = h;
  pt.radial_coeff = power_product(h, profile.overall);
  for (const auto& exps : profile.block_exponents)
    pt.block_coeffs.push_back(power_product(h, exps));
  if (!pt.block_coeffs.empty()) pt.m1_with_rho2 = pt.block_coeffs[0] * pt.rho * pt.rho;
  for (const auto& exps : profile.scalar_exponents)
    pt.scalars.push_back(power_product(h, exps));
  for (const FormDescriptor& f : profile.forms) {
    double q = f.Q ? f.Q->to_double() : std::sqrt(f.Q_squared.to_double());
    if (f.kind == BraneKind::electric)
      pt.form_coeffs.push_back(-q * power_product(h, f.h_powers));
    else
      pt.form_coeffs.push_back(q);
  }
  return pt;
}

CylindricalClass cylindrical_specialization(const SolutionProfile& profile) {
  CylindricalClass c;
  if (profile.w == -1) {
    c.label = "S-brane";
    c.description = "w = -1: the radial variable is time-like and the factor "
                    "spaces evolve with it";
    return c;
  }
  if (profile.m1_topology && *profile.m1_topology == "circle") {
    c.fluxbrane = true;
    c.label = "fluxbrane";
    c.description = "w = +1 with M_1 a circle (g^1 = dphi (x) dphi): the composite "
                    "fluxbrane family";
    return c;
  }
  c.label = "generic flux-type";
  c.description = "w = +1 but M_1 is not marked as a circle";
  return c;
}

std::optional<double> find_breakdown(const ModuliSolution& sol,
                                     std::span<const Rational> values, double z_max,
                                     double width) {
  if (!(z_max > 0) || !(width > 0))
    fail(ErrorCode::invalid_argument, "z_max and width must be positive");
  std::span<const Rational> bind = sol.mode == SolveMode::numeric ? std::span<const Rational>{}
                                                                  : values;
  if (static_cast<int>(bind.size()) != sol.arity())
    fail(ErrorCode::invalid_argument, "parameter values required for a symbolic solution");

  const int m = sol.brane_count();
  std::vector<Series> H;
  for (int s = 0; s < m; ++s) H.push_back(sol.brane_series(s, sol.order));
  auto positive = [&](const Rational& z) {
    for (int s = 0; s < m; ++s)
      if (H[s].eval(z, bind).sign() <= 0) return false;
    return true;
  };

  // Coarse scan, then exact-sign bisection on the first bracketing cell.
  const int cells = 1024;
  const Rational top = Rational::from_double_exact(z_max);
  Rational lo(0);
  Rational hi;
  bool found = false;
  for (int k = 1; k <= cells; ++k) {
    Rational z = top * Rational(k, cells);
    if (!positive(z)) {
      hi = z;
      found = true;
      break;
    }
    lo = z;
  }
  if (!found) return std::nullopt;

  const Rational w = Rational::from_double_exact(width);
  while (hi - lo > w) {
    Rational mid = (lo + hi) / Rational(2);
    if (positive(mid))
      lo = mid;
    else
      hi = mid;
  }
  return ((lo + hi) / Rational(2)).to_double();
}

}  // namespace tb
