// Command-line front end. Everything flows through the shared C API; no
// direct linkage against the core library.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "todabrane.h"

namespace {

// Exit codes: 0 success, 1 bad input, 2 computation error, 3 verification
// failure.
constexpr int exit_ok = 0;
constexpr int exit_bad_input = 1;
constexpr int exit_computation = 2;
constexpr int exit_verification = 3;

int exit_code_for(tb_status status) {
  switch (status) {
    case TB_OK: return exit_ok;
    case TB_ERR_INVALID_ARGUMENT:
    case TB_ERR_PARSE: return exit_bad_input;
    default: return exit_computation;
  }
}

[[noreturn]] void die(tb_status status) {
  std::cerr << "error [" << tb_status_name(status) << "]: " << tb_last_error() << "\n";
  std::exit(exit_code_for(status));
}

[[noreturn]] void die_input(const std::string& message) {
  std::cerr << "error [InvalidArgument]: " << message << "\n";
  std::exit(exit_bad_input);
}

struct StringGuard {
  char* s = nullptr;
  ~StringGuard() { tb_string_free(s); }
};

/// Runs a C API call that fills a JSON string; exits on failure.
std::string call(tb_status status, StringGuard& out) {
  if (status != TB_OK) die(status);
  return std::string(out.s);
}

void write_output(const std::string& text, const std::string& output_path) {
  if (output_path.empty() || output_path == "-") {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << "\n";
    return;
  }
  std::ofstream out(output_path);
  if (!out) die_input("cannot open output file " + output_path);
  out << text;
  if (text.empty() || text.back() != '\n') out << "\n";
}

std::string pretty(const std::string& compact_json) {
  return nlohmann::json::parse(compact_json).dump(2);
}

/// Accepts either an algebra name (A1, A1+A1, A2, B2, C2, G2) or an inline
/// JSON matrix.
std::string matrix_from_args(const std::string& algebra, const std::string& matrix) {
  if (!algebra.empty() && !matrix.empty())
    die_input("--algebra and --matrix are mutually exclusive");
  if (!algebra.empty()) {
    StringGuard out;
    return call(tb_algebra_matrix(algebra.c_str(), &out.s), out);
  }
  if (!matrix.empty()) return matrix;
  die_input("one of --algebra or --matrix is required");
}

struct ModelGuard {
  tb_model* m = nullptr;
  ~ModelGuard() { tb_model_free(m); }
};

struct SolutionGuard {
  tb_solution* s = nullptr;
  ~SolutionGuard() { tb_solution_free(s); }
};

std::string csv_escape(const nlohmann::json& v) {
  if (v.is_number()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  return v.dump();
}

/// Flattens profile grid points into rho,z,H_*,coefficients columns.
std::string profile_csv(const nlohmann::json& doc) {
  const auto& points = doc.at("points");
  std::string out;
  bool header_done = false;
  for (const auto& p : points) {
    if (p.contains("broken")) {
      out += csv_escape(p.at("rho")) + ",broken\n";
      continue;
    }
    if (!header_done) {
      out += "rho,z";
      auto count = [&](const char* key) {
        return p.contains(key) ? p.at(key).size() : size_t{0};
      };
      for (size_t i = 1; i <= count("H"); ++i) out += ",H_" + std::to_string(i);
      out += ",radial_coeff";
      for (size_t i = 1; i <= count("block_coeffs"); ++i)
        out += ",block_" + std::to_string(i);
      out += ",m1_with_rho2";
      for (size_t i = 1; i <= count("scalars"); ++i)
        out += ",exp_phi_" + std::to_string(i);
      for (size_t i = 1; i <= count("form_coeffs"); ++i)
        out += ",form_" + std::to_string(i);
      out += "\n";
      header_done = true;
    }
    out += csv_escape(p.at("rho")) + "," + csv_escape(p.at("z"));
    for (const auto& v : p.at("H")) out += "," + csv_escape(v);
    out += "," + csv_escape(p.at("radial_coeff"));
    for (const auto& v : p.at("block_coeffs")) out += "," + csv_escape(v);
    out += "," + csv_escape(p.at("m1_with_rho2"));
    for (const auto& v : p.at("scalars")) out += "," + csv_escape(v);
    for (const auto& v : p.at("form_coeffs")) out += "," + csv_escape(v);
    out += "\n";
  }
  return out;
}

std::string trajectory_csv(const nlohmann::json& run) {
  std::string out = "z";
  const auto& traj = run.at("trajectory");
  if (!traj.empty())
    for (size_t i = 1; i <= traj.front().at("H").size(); ++i)
      out += ",H_" + std::to_string(i);
  out += "\n";
  for (const auto& smp : traj) {
    out += csv_escape(smp.at("z"));
    for (const auto& v : smp.at("H")) out += "," + csv_escape(v);
    out += "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact moduli polynomials and solution profiles for composite "
               "fluxbrane and S-brane models"};
  app.set_version_flag("--version", std::string(tb_version()));
  app.require_subcommand(1);

  std::string output_path;
  std::string format = "json";
  app.add_option("--output", output_path, "Write to a file instead of stdout")
      ->capture_default_str();
  app.add_option("--format", format, "Output format: json or csv (tabular outputs only)")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();

  // solve
  auto* solve = app.add_subcommand("solve", "Solve the master equations to a given order");
  std::string solve_algebra, solve_matrix, solve_model, solve_values;
  int solve_order = 0;
  bool solve_symbolic = false;
  solve->add_option("--algebra", solve_algebra, "Algebra name: A1, A1+A1, A2, B2, C2, G2");
  solve->add_option("--matrix", solve_matrix, "Quasi-Cartan matrix as JSON [[...],...]");
  solve->add_option("--model", solve_model, "Brane model file (numeric mode, P from model)");
  solve->add_option("--order", solve_order, "Truncation order (>= 1)")->required();
  solve->add_flag("--symbolic", solve_symbolic, "Keep every P_s a free symbol (default)");
  solve->add_option("--values", solve_values,
                    "Bind P_s to rationals, e.g. '[1, \"3/2\"]' (numeric mode)");

  // build
  auto* build = app.add_subcommand("build", "Constants, validation, and profile of a model");
  std::string build_model, build_target_matrix, build_target_algebra;
  build->add_option("--model", build_model, "Brane model file")->required();
  build->add_option("--intersect-target", build_target_matrix,
                    "Solve for the intersection dimensions forcing this quasi-Cartan "
                    "matrix (JSON)");
  build->add_option("--intersect-algebra", build_target_algebra,
                    "Same, with a named algebra as the target");

  // verify
  auto* verify = app.add_subcommand(
      "verify", "Polynomial-structure, residual, and ODE checks for a matrix");
  std::string verify_algebra, verify_matrix, verify_trajectory;
  int verify_margin = 4;
  double verify_rtol = 1e-10, verify_atol = 1e-12, verify_max_dev = 1e-8;
  verify->add_option("--algebra", verify_algebra, "Algebra name");
  verify->add_option("--matrix", verify_matrix, "Quasi-Cartan matrix as JSON");
  verify->add_option("--margin", verify_margin, "Extra orders checked beyond max(n_s)")
      ->capture_default_str();
  verify->add_option("--rtol", verify_rtol, "ODE relative tolerance")->capture_default_str();
  verify->add_option("--atol", verify_atol, "ODE absolute tolerance")->capture_default_str();
  verify->add_option("--max-dev", verify_max_dev,
                     "Maximum allowed ODE/polynomial relative deviation")
      ->capture_default_str();
  verify->add_option("--trajectory", verify_trajectory,
                     "Also write the P_s = 1 ODE trajectory to this CSV file");

  // profile
  auto* profile = app.add_subcommand("profile", "Evaluate a model's profile on a rho grid");
  std::string profile_model;
  double rho_min = 0.0, rho_max = 1.0;
  int profile_steps = 16, profile_order = 8;
  profile->add_option("--model", profile_model, "Brane model file")->required();
  profile->add_option("--rho-min", rho_min, "Grid start")->capture_default_str();
  profile->add_option("--rho-max", rho_max, "Grid end")->capture_default_str();
  profile->add_option("--steps", profile_steps, "Number of grid intervals")
      ->capture_default_str();
  profile->add_option("--order", profile_order, "Moduli truncation order")
      ->capture_default_str();

  // Let --output/--format appear after the subcommand's own options.
  for (CLI::App* sub : {solve, build, verify, profile}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_bad_input;
  }

  if (solve->parsed()) {
    if (solve_symbolic && !solve_values.empty())
      die_input("--symbolic and --values are mutually exclusive");
    std::string result;
    if (!solve_model.empty()) {
      if (!solve_algebra.empty() || !solve_matrix.empty())
        die_input("--model excludes --algebra and --matrix");
      if (solve_symbolic || !solve_values.empty())
        die_input("--model implies numeric mode with the model's own P values");
      ModelGuard model;
      if (tb_status st = tb_model_load(solve_model.c_str(), &model.m); st != TB_OK) die(st);
      SolutionGuard sol;
      if (tb_status st = tb_model_solve(model.m, solve_order, &sol.s); st != TB_OK) die(st);
      StringGuard out;
      result = call(tb_solution_to_json(sol.s, &out.s), out);
    } else {
      std::string matrix = matrix_from_args(solve_algebra, solve_matrix);
      SolutionGuard sol;
      const char* values = solve_values.empty() ? nullptr : solve_values.c_str();
      if (tb_status st = tb_solve(matrix.c_str(), solve_order, values, &sol.s); st != TB_OK)
        die(st);
      StringGuard out;
      result = call(tb_solution_to_json(sol.s, &out.s), out);
    }
    if (format == "csv") die_input("solve output is not tabular; use --format json");
    write_output(pretty(result), output_path);
    return exit_ok;
  }

  if (build->parsed()) {
    ModelGuard model;
    if (tb_status st = tb_model_load(build_model.c_str(), &model.m); st != TB_OK) die(st);
    std::string target;
    if (!build_target_matrix.empty() || !build_target_algebra.empty())
      target = matrix_from_args(build_target_algebra, build_target_matrix);
    StringGuard out;
    std::string result =
        call(tb_model_build(model.m, target.empty() ? nullptr : target.c_str(), &out.s), out);
    if (format == "csv") die_input("build output is not tabular; use --format json");
    write_output(pretty(result), output_path);
    return exit_ok;
  }

  if (verify->parsed()) {
    std::string matrix = matrix_from_args(verify_algebra, verify_matrix);
    StringGuard out;
    std::string result = call(tb_verify(matrix.c_str(), verify_margin, verify_rtol,
                                        verify_atol, verify_max_dev, &out.s),
                              out);
    nlohmann::json doc = nlohmann::json::parse(result);
    if (!verify_trajectory.empty()) {
      nlohmann::json ones = nlohmann::json::array();
      for (size_t i = 0; i < nlohmann::json::parse(matrix).size(); ++i) ones.push_back(1);
      StringGuard run;
      std::string run_json =
          call(tb_integrate(matrix.c_str(), ones.dump().c_str(), 1e-6, 1.0, verify_rtol,
                            verify_atol, &run.s),
               run);
      std::ofstream traj(verify_trajectory);
      if (!traj) die_input("cannot open trajectory file " + verify_trajectory);
      traj << trajectory_csv(nlohmann::json::parse(run_json));
    }
    if (format == "csv") die_input("verify output is not tabular; use --format json");
    write_output(doc.dump(2), output_path);
    return doc.at("pass").get<bool>() ? exit_ok : exit_verification;
  }

  if (profile->parsed()) {
    ModelGuard model;
    if (tb_status st = tb_model_load(profile_model.c_str(), &model.m); st != TB_OK) die(st);
    StringGuard out;
    std::string result = call(tb_model_profile_grid(model.m, profile_order, rho_min, rho_max,
                                                    profile_steps, &out.s),
                              out);
    if (format == "csv")
      write_output(profile_csv(nlohmann::json::parse(result)), output_path);
    else
      write_output(pretty(result), output_path);
    return exit_ok;
  }

  return exit_bad_input;
}
