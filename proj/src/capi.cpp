#include "todabrane.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "todabrane/brane_model.hpp"
#include "todabrane/error.hpp"
#include "todabrane/ode_check.hpp"
#include "todabrane/profile.hpp"
#include "todabrane/toda.hpp"

struct tb_model {
  tb::BraneModel model;
};

struct tb_solution {
  tb::ModuliSolution sol;
};

namespace {

thread_local std::string g_last_error;

tb_status map_code(tb::ErrorCode c) {
  using EC = tb::ErrorCode;
  switch (c) {
    case EC::invalid_argument: return TB_ERR_INVALID_ARGUMENT;
    case EC::parse_error: return TB_ERR_PARSE;
    case EC::arity_mismatch: return TB_ERR_ARITY;
    case EC::singular_matrix: return TB_ERR_SINGULAR_MATRIX;
    case EC::zero_diagonal: return TB_ERR_ZERO_DIAGONAL;
    case EC::singular_scalar_metric: return TB_ERR_SINGULAR_SCALAR_METRIC;
    case EC::no_integer_solution: return TB_ERR_NO_INTEGER_SOLUTION;
    case EC::inconsistent_target: return TB_ERR_INCONSISTENT;
    case EC::non_positive_modulus: return TB_ERR_NONPOSITIVE_MODULUS;
    case EC::step_failure: return TB_ERR_STEP_FAILURE;
    case EC::positivity_loss: return TB_ERR_POSITIVITY_LOSS;
    case EC::internal: return TB_ERR_INTERNAL;
  }
  return TB_ERR_INTERNAL;
}

template <typename F>
tb_status guarded(F&& f) {
  try {
    f();
    g_last_error.clear();
    return TB_OK;
  } catch (const tb::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = e.what();
    return TB_ERR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TB_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return TB_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) tb::fail(tb::ErrorCode::internal, "out of memory");
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const nlohmann::json& j, char** out_json) {
  if (!out_json) tb::fail(tb::ErrorCode::invalid_argument, "output pointer is NULL");
  *out_json = dup_string(j.dump());
}

nlohmann::json parse_json(const char* text, const char* what) {
  if (!text) tb::fail(tb::ErrorCode::invalid_argument, std::string(what) + " is NULL");
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    tb::fail(tb::ErrorCode::parse_error, std::string(what) + ": " + e.what());
  }
}

tb::QuasiCartanMatrix parse_matrix(const char* matrix_json) {
  return tb::QuasiCartanMatrix(
      tb::RationalMatrix::from_json(parse_json(matrix_json, "matrix JSON")));
}

std::vector<tb::Rational> parse_values(const char* values_json, const char* what) {
  nlohmann::json j = parse_json(values_json, what);
  if (!j.is_array()) tb::fail(tb::ErrorCode::parse_error, std::string(what) + " must be a list");
  std::vector<tb::Rational> v;
  for (const auto& c : j) {
    if (c.is_number_integer())
      v.push_back(tb::Rational(c.get<long>()));
    else if (c.is_string())
      v.push_back(tb::Rational::from_string(c.get<std::string>()));
    else
      tb::fail(tb::ErrorCode::parse_error,
               std::string(what) + " entries must be integers or 'num/den' strings");
  }
  return v;
}

nlohmann::json residual_report(const tb::ResidualResult& r) {
  nlohmann::json j;
  j["path"] = r.polynomial_path ? "exact-polynomial" : "truncated-series";
  j["all_zero"] = r.all_zero();
  nlohmann::json branes = nlohmann::json::array();
  for (const tb::Series& s : r.residuals) {
    nlohmann::json b;
    int fz = s.first_nonzero();
    if (!r.polynomial_path) b["checked_to_order"] = s.order();
    b["first_nonzero_order"] = fz < 0 ? nlohmann::json(nullptr) : nlohmann::json(fz);
    if (fz >= 0) b["first_nonzero"] = s.coeff(fz).to_json();
    branes.push_back(std::move(b));
  }
  j["branes"] = std::move(branes);
  return j;
}

const tb::ModuliSolution& deref(const tb_solution* sol) {
  if (!sol) tb::fail(tb::ErrorCode::invalid_argument, "solution handle is NULL");
  return sol->sol;
}

const tb::BraneModel& deref(const tb_model* model) {
  if (!model) tb::fail(tb::ErrorCode::invalid_argument, "model handle is NULL");
  return model->model;
}

}  // namespace

extern "C" {

const char* tb_version(void) { return "1.0.0"; }

const char* tb_status_name(tb_status status) {
  switch (status) {
    case TB_OK: return "Ok";
    case TB_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case TB_ERR_PARSE: return "ParseError";
    case TB_ERR_ARITY: return "ArityMismatch";
    case TB_ERR_SINGULAR_MATRIX: return "SingularMatrix";
    case TB_ERR_ZERO_DIAGONAL: return "ZeroDiagonal";
    case TB_ERR_SINGULAR_SCALAR_METRIC: return "SingularScalarMetric";
    case TB_ERR_NO_INTEGER_SOLUTION: return "NoIntegerSolution";
    case TB_ERR_INCONSISTENT: return "Inconsistent";
    case TB_ERR_NONPOSITIVE_MODULUS: return "NonPositiveModulus";
    case TB_ERR_STEP_FAILURE: return "StepFailure";
    case TB_ERR_POSITIVITY_LOSS: return "PositivityLoss";
    case TB_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* tb_last_error(void) { return g_last_error.c_str(); }

void tb_string_free(char* s) { std::free(s); }

tb_status tb_algebra_matrix(const char* name, char** out_json) {
  return guarded([&] {
    if (!name) tb::fail(tb::ErrorCode::invalid_argument, "algebra name is NULL");
    emit(tb::QuasiCartanMatrix::named(name).entries().to_json(), out_json);
  });
}

tb_status tb_weyl_degrees(const char* matrix_json, char** out_json) {
  return guarded([&] {
    tb::QuasiCartanMatrix A = parse_matrix(matrix_json);
    std::vector<tb::Rational> degrees = tb::weyl_degrees(A);
    nlohmann::json j;
    nlohmann::json list = nlohmann::json::array();
    bool integral = true;
    for (const tb::Rational& d : degrees) {
      list.push_back(d.to_string());
      if (!d.is_integer() || d.sign() <= 0) integral = false;
    }
    j["degrees"] = std::move(list);
    auto label = A.classify();
    j["algebra"] = label ? nlohmann::json(*label) : nlohmann::json(nullptr);
    j["all_positive_integers"] = integral;
    emit(j, out_json);
  });
}

tb_status tb_solve(const char* matrix_json, int order, const char* values_json,
                   tb_solution** out) {
  return guarded([&] {
    if (!out) tb::fail(tb::ErrorCode::invalid_argument, "output pointer is NULL");
    tb::QuasiCartanMatrix A = parse_matrix(matrix_json);
    tb::ModuliSolution sol =
        values_json
            ? tb::solve_coefficients(A, order, tb::SolveMode::numeric,
                                     parse_values(values_json, "values JSON"))
            : tb::solve_coefficients(A, order, tb::SolveMode::symbolic);
    *out = new tb_solution{std::move(sol)};
  });
}

tb_status tb_solution_to_json(const tb_solution* sol, char** out_json) {
  return guarded([&] { emit(deref(sol).to_json(), out_json); });
}

tb_status tb_residual(const tb_solution* sol, int check_order, char** out_json) {
  return guarded([&] {
    const tb::ModuliSolution& s = deref(sol);
    tb::ResidualResult r =
        check_order <= 0
            ? tb::residual_check(s.matrix, s, std::max(1, s.order - 1))
            : tb::residual_check(s.matrix, s, check_order, tb::ResidualPath::truncated_series);
    emit(residual_report(r), out_json);
  });
}

tb_status tb_verify(const char* matrix_json, int margin, double rtol, double atol,
                    double max_rel_dev, char** out_json) {
  return guarded([&] {
    tb::QuasiCartanMatrix A = parse_matrix(matrix_json);
    tb::ConjectureReport report = tb::verify_conjecture(A, margin);

    nlohmann::json j;
    j["conjecture"] = report.to_json();
    bool pass = true;

    if (report.degrees_defined) {
      const tb::ModuliSolution& sol = *report.solution;
      tb::ResidualResult res = tb::residual_check(A, sol, sol.order - 1);
      j["residual"] = residual_report(res);
      pass = report.confirmed() && res.all_zero();

      if (report.confirmed()) {
        // The polynomial structure holds for all P_s; spot-check the claim
        // numerically at P_s = 1 against an independent ODE integration.
        std::vector<tb::Rational> ones(static_cast<size_t>(A.rank()), tb::Rational(1));
        std::vector<double> grid;
        for (int k = 1; k <= 10; ++k) grid.push_back(0.1 * k);
        tb::OdeSettings settings;
        settings.rtol = rtol;
        settings.atol = atol;
        tb::CrossValidation cv = tb::cross_validate(sol, ones, grid, max_rel_dev, settings);
        nlohmann::json cvj = cv.to_json();
        cvj.erase("points");  // summary only; tb_cross_validate gives detail
        j["numeric"] = std::move(cvj);
        pass = pass && cv.pass;
      } else {
        j["numeric"] = {{"skipped", "polynomial structure not confirmed"}};
      }
    } else {
      // Degrees undefined: nothing further can be checked, and nothing
      // failed. The report says why.
      j["residual"] = nullptr;
      j["numeric"] = nullptr;
    }

    j["pass"] = pass;
    emit(j, out_json);
  });
}

tb_status tb_cross_validate(const tb_solution* sol, const char* values_json,
                            const char* grid_json, double rtol, double atol,
                            double tolerance, char** out_json) {
  return guarded([&] {
    const tb::ModuliSolution& s = deref(sol);
    std::vector<tb::Rational> values;
    if (values_json) values = parse_values(values_json, "values JSON");
    nlohmann::json gj = parse_json(grid_json, "grid JSON");
    if (!gj.is_array() || gj.empty())
      tb::fail(tb::ErrorCode::invalid_argument, "grid must be a non-empty list of numbers");
    std::vector<double> grid;
    for (const auto& g : gj) {
      if (!g.is_number()) tb::fail(tb::ErrorCode::parse_error, "grid entries must be numbers");
      grid.push_back(g.get<double>());
    }
    tb::OdeSettings settings;
    settings.rtol = rtol;
    settings.atol = atol;
    emit(tb::cross_validate(s, values, grid, tolerance, settings).to_json(), out_json);
  });
}

tb_status tb_integrate(const char* matrix_json, const char* p_values_json, double z0,
                       double z1, double rtol, double atol, char** out_json) {
  return guarded([&] {
    tb::QuasiCartanMatrix A = parse_matrix(matrix_json);
    std::vector<tb::Rational> P = parse_values(p_values_json, "P values JSON");
    tb::OdeSettings settings;
    settings.rtol = rtol;
    settings.atol = atol;
    if (z0 > 0) settings.z0 = z0;
    tb::ModuliSolution sol =
        tb::solve_coefficients(A, settings.seed_order, tb::SolveMode::numeric, P);
    std::vector<tb::Rational> B;
    for (const tb::Rational& p : P) B.push_back(tb::Rational(4) * p);
    tb::OdeRun run = tb::integrate_master_ode(A, B, sol, {}, z1, settings);
    nlohmann::json j = run.to_json();
    nlohmann::json traj = nlohmann::json::array();
    for (const tb::OdeSample& smp : run.trajectory)
      traj.push_back({{"z", smp.z}, {"H", smp.H}});
    j["trajectory"] = std::move(traj);
    emit(j, out_json);
  });
}

tb_status tb_breakdown(const tb_solution* sol, const char* values_json, double z_max,
                       double width, char** out_json) {
  return guarded([&] {
    const tb::ModuliSolution& s = deref(sol);
    std::vector<tb::Rational> values;
    if (values_json) values = parse_values(values_json, "values JSON");
    std::optional<double> z = tb::find_breakdown(s, values, z_max, width);
    nlohmann::json j;
    j["found"] = z.has_value();
    j["z"] = z ? nlohmann::json(*z) : nlohmann::json(nullptr);
    emit(j, out_json);
  });
}

void tb_solution_free(tb_solution* sol) { delete sol; }

tb_status tb_model_parse(const char* json, tb_model** out) {
  return guarded([&] {
    if (!out) tb::fail(tb::ErrorCode::invalid_argument, "output pointer is NULL");
    *out = new tb_model{tb::BraneModel::from_json(parse_json(json, "model JSON"))};
  });
}

tb_status tb_model_load(const char* path, tb_model** out) {
  return guarded([&] {
    if (!out) tb::fail(tb::ErrorCode::invalid_argument, "output pointer is NULL");
    if (!path) tb::fail(tb::ErrorCode::invalid_argument, "path is NULL");
    *out = new tb_model{tb::BraneModel::from_file(path)};
  });
}

tb_status tb_model_build(const tb_model* model, const char* target_json, char** out_json) {
  return guarded([&] {
    const tb::BraneModel& m = deref(model);
    nlohmann::json j;
    j["model"] = m.to_json();
    j["D"] = m.D();
    j["validation"] = tb::validate_model(m).to_json();
    if (!m.branes.empty()) {
      tb::BraneConstants c = tb::compute_brane_constants(m);
      j["constants"] = c.to_json();
      j["profile"] = tb::build_profile(m, m.branes, c).to_json();
    } else {
      j["constants"] = nullptr;
      j["profile"] = tb::build_profile(m).to_json();
    }
    j["classification"] = tb::cylindrical_specialization(tb::build_profile(m)).label;
    if (target_json) {
      tb::QuasiCartanMatrix target = parse_matrix(target_json);
      j["intersections"] = tb::solve_intersection_dims(m, target).to_json();
    }
    emit(j, out_json);
  });
}

tb_status tb_model_solve(const tb_model* model, int order, tb_solution** out) {
  return guarded([&] {
    if (!out) tb::fail(tb::ErrorCode::invalid_argument, "output pointer is NULL");
    const tb::BraneModel& m = deref(model);
    if (m.branes.empty())
      tb::fail(tb::ErrorCode::invalid_argument, "model has no branes to solve for");
    tb::BraneConstants c = tb::compute_brane_constants(m);
    *out = new tb_solution{
        tb::solve_coefficients(c.A, order, tb::SolveMode::numeric, c.P)};
  });
}

tb_status tb_model_profile_grid(const tb_model* model, int order, double rho_min,
                                double rho_max, int steps, char** out_json) {
  return guarded([&] {
    const tb::BraneModel& m = deref(model);
    if (!(rho_min >= 0) || !(rho_max > rho_min))
      tb::fail(tb::ErrorCode::invalid_argument, "need 0 <= rho_min < rho_max");
    if (steps < 1) tb::fail(tb::ErrorCode::invalid_argument, "steps must be >= 1");

    nlohmann::json j;
    tb::SolutionProfile profile = tb::build_profile(m);
    j["profile"] = profile.to_json();
    j["classification"] = tb::cylindrical_specialization(profile).label;

    std::optional<double> breakdown;
    std::optional<tb::ModuliSolution> sol;
    if (!m.branes.empty()) {
      tb::BraneConstants c = tb::compute_brane_constants(m);
      sol = tb::solve_coefficients(c.A, order, tb::SolveMode::numeric, c.P);
      breakdown = tb::find_breakdown(*sol, {}, rho_max * rho_max);
    }
    j["breakdown_z"] = breakdown ? nlohmann::json(*breakdown) : nlohmann::json(nullptr);

    // Uniform grid; exact rho values keep the evaluation deterministic.
    nlohmann::json points = nlohmann::json::array();
    const tb::Rational lo = tb::Rational::from_double_exact(rho_min);
    const tb::Rational hi = tb::Rational::from_double_exact(rho_max);
    for (int k = 0; k <= steps; ++k) {
      tb::Rational rho = lo + (hi - lo) * tb::Rational(k, steps);
      if (!sol) {
        nlohmann::json pj;
        pj["rho"] = rho.to_double();
        pj["z"] = (rho * rho).to_double();
        points.push_back(std::move(pj));
        continue;
      }
      if (breakdown && (rho * rho).to_double() >= *breakdown) {
        points.push_back({{"rho", rho.to_double()}, {"broken", true}});
        continue;
      }
      try {
        points.push_back(tb::evaluate_profile(profile, *sol, rho).to_json());
      } catch (const tb::Error& e) {
        // The breakdown estimate carries bisection slack; a grid point can
        // land between the estimate and the true zero of H_s.
        if (e.code() != tb::ErrorCode::non_positive_modulus) throw;
        points.push_back({{"rho", rho.to_double()}, {"broken", true}});
      }
    }
    j["points"] = std::move(points);
    emit(j, out_json);
  });
}

void tb_model_free(tb_model* model) { delete model; }

}  // extern "C"
