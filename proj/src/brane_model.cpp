#include "todabrane/brane_model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tb {

namespace {

Rational rational_from_json(const nlohmann::json& j, const std::string& what) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_string()) return Rational::from_string(j.get<std::string>());
  fail(ErrorCode::parse_error, what + " must be an integer or a 'num/den' string");
}

int sign_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_number_integer() || (j.get<long>() != 1 && j.get<long>() != -1))
    fail(ErrorCode::parse_error, what + " must be 1 or -1");
  return static_cast<int>(j.get<long>());
}

/// Mistyped keys silently changing the physics is the failure mode this
/// guards against.
void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> allowed,
                         const std::string& context) {
  for (const auto& item : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end())
      fail(ErrorCode::parse_error, context + ": unknown key \"" + item.key() + "\"");
  }
}

const nlohmann::json& require_key(const nlohmann::json& j, const char* key,
                                  const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) fail(ErrorCode::parse_error, context + ": missing key \"" + key + "\"");
  return *it;
}

std::string pair_label(int s, int t) {
  return "(s=" + std::to_string(s + 1) + ",t=" + std::to_string(t + 1) + ")";
}

}  // namespace

std::vector<Rational> ScalarSector::coupling(const std::string& form) const {
  auto it = lambda.find(form);
  if (it != lambda.end()) return it->second;
  return std::vector<Rational>(static_cast<size_t>(count()), Rational(0));
}

const char* brane_kind_name(BraneKind k) {
  return k == BraneKind::electric ? "electric" : "magnetic";
}

int BraneModel::D() const {
  int d = 1;
  for (const FactorSpace& f : factor_spaces) d += f.dim;
  return d;
}

int BraneModel::dim_of(std::span<const int> I) const {
  int d = 0;
  for (int i : I) d += factor_spaces.at(static_cast<size_t>(i) - 1).dim;
  return d;
}

int BraneModel::eps_of(std::span<const int> I) const {
  int e = 1;
  for (int i : I) e *= factor_spaces.at(static_cast<size_t>(i) - 1).eps;
  return e;
}

const FormField& BraneModel::form_of(const Brane& b) const {
  for (const FormField& f : forms)
    if (f.name == b.form) return f;
  fail(ErrorCode::internal, "brane references unknown form \"" + b.form + "\"");
}

int BraneModel::required_worldvolume_dim(const Brane& b) const {
  const FormField& f = form_of(b);
  return b.kind == BraneKind::electric ? f.rank - 1 : D() - f.rank - 1;
}

BraneModel BraneModel::from_json(const nlohmann::json& j) {
  if (!j.is_object()) fail(ErrorCode::parse_error, "model must be a JSON object");
  reject_unknown_keys(j, {"factor_spaces", "forms", "scalars", "eps_g", "w", "branes"}, "model");

  BraneModel m;

  const auto& spaces = require_key(j, "factor_spaces", "model");
  if (!spaces.is_array() || spaces.empty())
    fail(ErrorCode::parse_error, "factor_spaces must be a non-empty list");
  for (const auto& sj : spaces) {
    reject_unknown_keys(sj, {"dim", "eps", "topology"}, "factor space");
    FactorSpace f;
    const auto& dim = require_key(sj, "dim", "factor space");
    if (!dim.is_number_integer() || dim.get<long>() < 1)
      fail(ErrorCode::parse_error, "factor space dim must be a positive integer");
    f.dim = static_cast<int>(dim.get<long>());
    f.eps = sign_from_json(require_key(sj, "eps", "factor space"), "factor space eps");
    if (auto it = sj.find("topology"); it != sj.end()) {
      if (!it->is_string() || (*it != "circle" && *it != "line"))
        fail(ErrorCode::parse_error, "topology must be \"circle\" or \"line\"");
      f.topology = it->get<std::string>();
    }
    m.factor_spaces.push_back(std::move(f));
  }
  if (m.factor_spaces[0].dim != 1)
    fail(ErrorCode::parse_error, "the first factor space M_1 must be one-dimensional");

  if (auto it = j.find("forms"); it != j.end()) {
    if (!it->is_array()) fail(ErrorCode::parse_error, "forms must be a list");
    for (const auto& fj : *it) {
      reject_unknown_keys(fj, {"name", "rank", "theta"}, "form");
      FormField f;
      const auto& name = require_key(fj, "name", "form");
      if (!name.is_string() || name.get<std::string>().empty())
        fail(ErrorCode::parse_error, "form name must be a non-empty string");
      f.name = name.get<std::string>();
      const auto& rank = require_key(fj, "rank", "form");
      if (!rank.is_number_integer() || rank.get<long>() < 1)
        fail(ErrorCode::parse_error, "form rank must be a positive integer");
      f.rank = static_cast<int>(rank.get<long>());
      f.theta = sign_from_json(require_key(fj, "theta", "form"), "form theta");
      for (const FormField& prev : m.forms)
        if (prev.name == f.name)
          fail(ErrorCode::parse_error, "duplicate form name \"" + f.name + "\"");
      m.forms.push_back(std::move(f));
    }
  }

  if (auto it = j.find("scalars"); it != j.end()) {
    reject_unknown_keys(*it, {"h", "lambda"}, "scalars");
    m.scalars.h = RationalMatrix::from_json(require_key(*it, "h", "scalars"));
    if (!m.scalars.h.is_square() || !m.scalars.h.is_symmetric())
      fail(ErrorCode::parse_error, "scalar metric h must be square and symmetric");
    if (auto lj = it->find("lambda"); lj != it->end()) {
      if (!lj->is_object()) fail(ErrorCode::parse_error, "lambda must map form names to vectors");
      for (const auto& entry : lj->items()) {
        bool known = std::any_of(m.forms.begin(), m.forms.end(), [&](const FormField& f) {
          return f.name == entry.key();
        });
        if (!known)
          fail(ErrorCode::parse_error, "lambda references unknown form \"" + entry.key() + "\"");
        if (!entry.value().is_array() ||
            static_cast<int>(entry.value().size()) != m.scalars.count())
          fail(ErrorCode::parse_error,
               "lambda vector for \"" + entry.key() + "\" must have one entry per scalar");
        std::vector<Rational> v;
        for (const auto& cj : entry.value())
          v.push_back(rational_from_json(cj, "lambda component"));
        m.scalars.lambda.emplace(entry.key(), std::move(v));
      }
    }
  }

  m.eps_g = sign_from_json(require_key(j, "eps_g", "model"), "eps_g");
  m.w = sign_from_json(require_key(j, "w", "model"), "w");

  if (auto it = j.find("branes"); it != j.end()) {
    if (!it->is_array()) fail(ErrorCode::parse_error, "branes must be a list");
    for (const auto& bj : *it) {
      reject_unknown_keys(bj, {"form", "kind", "I", "Q", "Q2"}, "brane");
      Brane b;
      const auto& form = require_key(bj, "form", "brane");
      if (!form.is_string()) fail(ErrorCode::parse_error, "brane form must be a string");
      b.form = form.get<std::string>();
      bool known = std::any_of(m.forms.begin(), m.forms.end(), [&](const FormField& f) {
        return f.name == b.form;
      });
      if (!known) fail(ErrorCode::parse_error, "brane references unknown form \"" + b.form + "\"");

      const auto& kind = require_key(bj, "kind", "brane");
      if (kind == "electric") {
        b.kind = BraneKind::electric;
      } else if (kind == "magnetic") {
        b.kind = BraneKind::magnetic;
      } else {
        fail(ErrorCode::parse_error, "brane kind must be \"electric\" or \"magnetic\"");
      }

      const auto& I = require_key(bj, "I", "brane");
      if (!I.is_array() || I.empty())
        fail(ErrorCode::parse_error, "brane worldvolume I must be a non-empty list");
      for (const auto& ij : I) {
        if (!ij.is_number_integer() || ij.get<long>() < 1 ||
            ij.get<long>() > static_cast<long>(m.factor_spaces.size()))
          fail(ErrorCode::parse_error, "brane worldvolume indices must lie in 1.." +
                                           std::to_string(m.factor_spaces.size()));
        b.I.push_back(static_cast<int>(ij.get<long>()));
      }
      std::sort(b.I.begin(), b.I.end());
      if (std::adjacent_find(b.I.begin(), b.I.end()) != b.I.end())
        fail(ErrorCode::parse_error, "brane worldvolume indices must be distinct");

      const bool has_q = bj.contains("Q");
      const bool has_q2 = bj.contains("Q2");
      if (has_q == has_q2)
        fail(ErrorCode::parse_error, "brane needs exactly one of \"Q\" (charge) or \"Q2\" (squared charge)");
      if (has_q) {
        Rational q = rational_from_json(bj["Q"], "brane charge Q");
        if (q.is_zero()) fail(ErrorCode::parse_error, "brane charge Q must be nonzero");
        b.Q_squared = q * q;
        b.Q = std::move(q);
      } else {
        // Irrational charges enter the constants only through Q^2, so a
        // pre-squared rational value is accepted directly.
        b.Q_squared = rational_from_json(bj["Q2"], "brane squared charge Q2");
        if (b.Q_squared.sign() <= 0)
          fail(ErrorCode::parse_error, "brane squared charge Q2 must be positive");
      }
      m.branes.push_back(std::move(b));
    }
  }

  return m;
}

BraneModel BraneModel::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::invalid_argument, "cannot open model file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::parse_error, "model file " + path + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json BraneModel::to_json() const {
  nlohmann::json j;
  j["factor_spaces"] = nlohmann::json::array();
  for (const FactorSpace& f : factor_spaces) {
    nlohmann::json fj{{"dim", f.dim}, {"eps", f.eps}};
    if (f.topology) fj["topology"] = *f.topology;
    j["factor_spaces"].push_back(std::move(fj));
  }
  j["forms"] = nlohmann::json::array();
  for (const FormField& f : forms)
    j["forms"].push_back({{"name", f.name}, {"rank", f.rank}, {"theta", f.theta}});
  if (scalars.count() > 0) {
    nlohmann::json sj;
    sj["h"] = scalars.h.to_json();
    nlohmann::json lj = nlohmann::json::object();
    for (const auto& [name, v] : scalars.lambda) {
      nlohmann::json vec = nlohmann::json::array();
      for (const Rational& c : v) vec.push_back(c.to_string());
      lj[name] = std::move(vec);
    }
    sj["lambda"] = std::move(lj);
    j["scalars"] = std::move(sj);
  }
  j["eps_g"] = eps_g;
  j["w"] = w;
  j["branes"] = nlohmann::json::array();
  for (const Brane& b : branes) {
    nlohmann::json bj;
    bj["form"] = b.form;
    bj["kind"] = brane_kind_name(b.kind);
    bj["I"] = b.I;
    if (b.Q)
      bj["Q"] = b.Q->to_string();
    else
      bj["Q2"] = b.Q_squared.to_string();
    j["branes"].push_back(std::move(bj));
  }
  return j;
}

bool ValidationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed; });
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json j;
  j["all_passed"] = all_passed();
  j["checks"] = nlohmann::json::array();
  for (const ValidationCheck& c : checks) {
    nlohmann::json cj{{"name", c.name}, {"passed", c.passed}};
    if (!c.detail.empty()) cj["detail"] = c.detail;
    j["checks"].push_back(std::move(cj));
  }
  return j;
}

namespace {

std::vector<int> worldvolume_intersection(const Brane& a, const Brane& b) {
  std::vector<int> out;
  std::set_intersection(a.I.begin(), a.I.end(), b.I.begin(), b.I.end(),
                        std::back_inserter(out));
  return out;
}

/// lambda_s . lambda_t in the inverse scalar metric.
Rational coupling_dot(const RationalMatrix& h_inv, std::span<const Rational> a,
                      std::span<const Rational> b) {
  Rational dot(0);
  for (int i = 0; i < h_inv.rows(); ++i)
    for (int j = 0; j < h_inv.cols(); ++j) dot += a[i] * h_inv.at(i, j) * b[j];
  return dot;
}

RationalMatrix inverse_scalar_metric(const BraneModel& model) {
  if (model.scalars.count() == 0) return RationalMatrix(0, 0);
  auto inv = model.scalars.h.inverse();
  if (!inv) fail(ErrorCode::singular_scalar_metric, "scalar metric h is not invertible");
  return *inv;
}

/// One B entry with the intersection dimension supplied explicitly; the
/// intersection solver reuses it with a symbolic value.
Rational pair_b_entry(const BraneModel& model, const Brane& s, const Brane& t,
                      const Rational& d_cap, const RationalMatrix& h_inv) {
  Rational two_minus_D(2 - model.D());
  Rational b = d_cap + Rational(model.dim_of(s.I)) * Rational(model.dim_of(t.I)) / two_minus_D;
  if (model.scalars.count() > 0) {
    Rational dot = coupling_dot(h_inv, model.scalars.coupling(s.form),
                                model.scalars.coupling(t.form));
    b += Rational(s.chi() * t.chi()) * dot;
  }
  return b;
}

}  // namespace

RationalMatrix compute_B_matrix(const BraneModel& model, std::span<const Brane> branes) {
  const RationalMatrix h_inv = inverse_scalar_metric(model);
  const int m = static_cast<int>(branes.size());
  RationalMatrix B(m, m);
  for (int s = 0; s < m; ++s)
    for (int t = s; t < m; ++t) {
      int d_cap = model.dim_of(worldvolume_intersection(branes[s], branes[t]));
      B.at(s, t) = pair_b_entry(model, branes[s], branes[t], Rational(d_cap), h_inv);
      B.at(t, s) = B.at(s, t);
    }
  return B;
}

RationalMatrix compute_B_matrix(const BraneModel& model) {
  return compute_B_matrix(model, model.branes);
}

QuasiCartanMatrix compute_quasi_cartan(const RationalMatrix& B) {
  if (!B.is_square()) fail(ErrorCode::invalid_argument, "B must be square");
  const int m = B.rows();
  for (int t = 0; t < m; ++t)
    if (B.at(t, t).is_zero())
      fail(ErrorCode::zero_diagonal,
           "B_{ss} = 0 for brane " + std::to_string(t + 1) + "; A is undefined");
  RationalMatrix A(m, m);
  for (int s = 0; s < m; ++s)
    for (int t = 0; t < m; ++t) A.at(s, t) = Rational(2) * B.at(s, t) / B.at(t, t);
  return QuasiCartanMatrix(std::move(A));
}

BraneConstants compute_brane_constants(const BraneModel& model, std::span<const Brane> branes) {
  RationalMatrix B = compute_B_matrix(model, branes);
  QuasiCartanMatrix A = compute_quasi_cartan(B);
  const int m = static_cast<int>(branes.size());

  BraneConstants c{std::move(B), std::move(A), {}, {}, {}, {}, {}};
  for (int s = 0; s < m; ++s) {
    const Brane& b = branes[s];
    int eps_I = model.eps_of(b.I);
    int theta = model.form_of(b).theta;
    int eps_s = b.kind == BraneKind::electric ? eps_I * theta : -model.eps_g * eps_I * theta;
    Rational K = c.B.at(s, s);
    Rational B_s = Rational(eps_s) * K * b.Q_squared;
    c.eps.push_back(eps_s);
    c.h.push_back(K.reciprocal());
    c.K.push_back(std::move(K));
    c.P.push_back(B_s / Rational(4));
    c.Bs.push_back(std::move(B_s));
  }
  return c;
}

BraneConstants compute_brane_constants(const BraneModel& model) {
  return compute_brane_constants(model, model.branes);
}

nlohmann::json BraneConstants::to_json() const {
  nlohmann::json j;
  j["B"] = B.to_json();
  j["A"] = A.entries().to_json();
  j["branes"] = nlohmann::json::array();
  for (size_t s = 0; s < K.size(); ++s) {
    j["branes"].push_back({{"eps", eps[s]},
                           {"K", K[s].to_string()},
                           {"h", h[s].to_string()},
                           {"B_s", Bs[s].to_string()},
                           {"P", P[s].to_string()}});
  }
  return j;
}

ValidationReport validate_model(const BraneModel& model, std::span<const Brane> branes) {
  ValidationReport report;
  const int m = static_cast<int>(branes.size());

  for (int s = 0; s < m; ++s) {
    int actual = model.dim_of(branes[s].I);
    int required = model.required_worldvolume_dim(branes[s]);
    report.checks.push_back(
        {"worldvolume-dim(s=" + std::to_string(s + 1) + ")", actual == required,
         "d(I) = " + std::to_string(actual) + ", " +
             brane_kind_name(branes[s].kind) + " rank-" +
             std::to_string(model.form_of(branes[s]).rank) + " form needs " +
             std::to_string(required)});
  }

  for (int s = 0; s < m; ++s)
    for (int t = s + 1; t < m; ++t) {
      const Brane& bs = branes[s];
      const Brane& bt = branes[t];
      if (bs.form != bt.form) continue;
      int d_cap = model.dim_of(worldvolume_intersection(bs, bt));
      if (bs.kind == bt.kind) {
        int bound = std::min(model.dim_of(bs.I), model.dim_of(bt.I)) - 2;
        report.checks.push_back({"R1" + pair_label(s, t), d_cap <= bound,
                                 "d(I cap J) = " + std::to_string(d_cap) +
                                     ", bound d(I) - 2 = " + std::to_string(bound)});
      } else {
        report.checks.push_back({"R2" + pair_label(s, t), d_cap != 0,
                                 "d(I cap J) = " + std::to_string(d_cap) +
                                     " (must be nonzero for an electric/magnetic pair)"});
      }
    }

  bool scalar_ok = model.scalars.count() == 0 || model.scalars.h.inverse().has_value();
  if (model.scalars.count() > 0)
    report.checks.push_back({"scalar-metric-invertible", scalar_ok,
                             scalar_ok ? "" : "det h = 0"});
  if (!scalar_ok || m == 0) return report;

  RationalMatrix B = compute_B_matrix(model, branes);
  bool diag_ok = true;
  for (int s = 0; s < m; ++s) {
    bool nz = !B.at(s, s).is_zero();
    diag_ok = diag_ok && nz;
    report.checks.push_back({"B-diagonal-nonzero(s=" + std::to_string(s + 1) + ")", nz,
                             "B_ss = " + B.at(s, s).to_string()});
  }
  Rational det = B.determinant();
  report.checks.push_back({"det-B-nonzero", !det.is_zero(), "det B = " + det.to_string()});

  if (!diag_ok) return report;
  BraneConstants c = compute_brane_constants(model, branes);
  for (int s = 0; s < m; ++s) {
    report.checks.push_back({"eps-positive(s=" + std::to_string(s + 1) + ")", c.eps[s] > 0,
                             "eps_s = " + std::to_string(c.eps[s])});
    report.checks.push_back({"K-positive(s=" + std::to_string(s + 1) + ")",
                             c.K[s].sign() > 0, "K_s = " + c.K[s].to_string()});
  }
  return report;
}

ValidationReport validate_model(const BraneModel& model) {
  return validate_model(model, model.branes);
}

nlohmann::json IntersectionDims::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const IntersectionEntry& e : entries) {
    nlohmann::json ej{{"s", e.s + 1}, {"t", e.t + 1}, {"d", e.d}};
    if (!e.note.empty()) ej["note"] = e.note;
    j.push_back(std::move(ej));
  }
  return j;
}

IntersectionDims solve_intersection_dims(const BraneModel& model, std::span<const Brane> branes,
                                         const QuasiCartanMatrix& target) {
  const int m = static_cast<int>(branes.size());
  if (target.rank() != m)
    fail(ErrorCode::invalid_argument, "target matrix rank must match the brane count");
  const RationalMatrix h_inv = inverse_scalar_metric(model);

  // Diagonal entries are fixed by the model (a brane always intersects
  // itself in its full worldvolume); only off-diagonal intersections are
  // unknown.
  std::vector<Rational> diag;
  for (int s = 0; s < m; ++s)
    diag.push_back(pair_b_entry(model, branes[s], branes[s],
                                Rational(model.dim_of(branes[s].I)), h_inv));

  IntersectionDims out;
  for (int s = 0; s < m; ++s)
    for (int t = s + 1; t < m; ++t) {
      if (diag[t].is_zero() || diag[s].is_zero())
        fail(ErrorCode::zero_diagonal,
             "B_{ss} = 0 for brane " + std::to_string(diag[s].is_zero() ? s + 1 : t + 1) +
                 "; the coupling equation is degenerate");
      // B_{st} required by the target, from each of the two equations it
      // appears in; B is symmetric, so they must agree.
      Rational b_st = target.at(s, t) * diag[t] / Rational(2);
      Rational b_ts = target.at(t, s) * diag[s] / Rational(2);
      if (b_st != b_ts)
        fail(ErrorCode::inconsistent_target,
             "pair " + pair_label(s, t) + ": the (s,t) and (t,s) equations force B_st = " +
                 b_st.to_string() + " and " + b_ts.to_string() +
                 "; the target's asymmetry is incompatible with the fixed diagonal");
      Rational correction = pair_b_entry(model, branes[s], branes[t], Rational(0), h_inv);
      Rational d_cap = b_st - correction;
      if (!d_cap.is_integer() || d_cap.sign() < 0)
        fail(ErrorCode::no_integer_solution,
             "pair " + pair_label(s, t) + ": forced d(I cap J) = " + d_cap.to_string() +
                 " is not a non-negative integer");

      IntersectionEntry e;
      e.s = s;
      e.t = t;
      e.d = d_cap.to_long();
      const bool same_form = branes[s].form == branes[t].form;
      const bool mixed_kind = branes[s].kind != branes[t].kind;
      if (e.d == 0 && same_form && mixed_kind)
        e.note = "zero intersection violates R2 for an electric/magnetic pair of one form";
      long min_d = std::min(model.dim_of(branes[s].I), model.dim_of(branes[t].I));
      if (e.d > min_d)
        e.note = "exceeds min(d(I), d(J)) = " + std::to_string(min_d) +
                 "; no index sets realize it";
      else if (same_form && !mixed_kind && e.d > min_d - 2)
        e.note = "violates R1 (d(I cap J) <= d(I) - 2)";
      out.entries.push_back(std::move(e));
    }
  return out;
}

IntersectionDims solve_intersection_dims(const BraneModel& model,
                                         const QuasiCartanMatrix& target) {
  return solve_intersection_dims(model, model.branes, target);
}

}  // namespace tb
