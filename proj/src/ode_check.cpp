#include "todabrane/ode_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tb {

namespace {

/// Dormand-Prince 5(4) tableau (the RKDP pair with FSAL).
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
// 5th-order minus embedded 4th-order weights (error estimator).
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

struct MasterSystem {
  std::vector<double> A;  // row-major m x m
  std::vector<double> B;
  int m = 0;

  /// y = (H_1..H_m, H_1'..H_m'); dy = (H', H'').
  void operator()(double z, const std::vector<double>& y, std::vector<double>& dy) const {
    for (int s = 0; s < m; ++s) {
      double h = y[s];
      if (!(h > 0)) fail(ErrorCode::positivity_loss, "H became non-positive during a stage");
      double r = 0.25 * B[s];
      for (int t = 0; t < m; ++t) r *= std::pow(y[t], -A[static_cast<size_t>(s) * m + t]);
      double hp = y[m + s];
      dy[s] = hp;
      dy[m + s] = (r * h - hp) / z + hp * hp / h;
    }
  }
};

}  // namespace

nlohmann::json OdeRun::to_json() const {
  nlohmann::json j;
  j["B"] = B;
  j["z0"] = z0;
  j["z1"] = z1;
  j["rtol"] = rtol;
  j["atol"] = atol;
  j["H_end"] = H_end;
  j["Hp_end"] = Hp_end;
  j["accepted"] = accepted;
  j["rejected"] = rejected;
  j["seed_deviation"] = seed_deviation;
  return j;
}

namespace {

struct Integrator {
  MasterSystem sys;
  double rtol, atol;
  std::vector<double> y;
  double z;
  size_t accepted = 0, rejected = 0;
  std::vector<double> k1;  // FSAL slope at the current point

  explicit Integrator(MasterSystem s, std::vector<double> y0, double z0, double rt, double at)
      : sys(std::move(s)), rtol(rt), atol(at), y(std::move(y0)), z(z0) {
    k1.resize(y.size());
    sys(z, y, k1);
  }

  /// Advances to exactly z_target; records every accepted point via `on_step`.
  template <typename F>
  void advance_to(double z_target, F&& on_step) {
    const size_t n = y.size();
    std::vector<double> k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y5(n);
    double h = (z_target - z) / 16;
    const double h_min = (z_target - z) * 1e-14;

    while (z < z_target) {
      h = std::min(h, z_target - z);
      bool stage_failed = false;
      double err = 0;
      try {
        auto stage = [&](double frac, std::vector<double>& k,
                         std::initializer_list<std::pair<const std::vector<double>*, double>>
                             terms) {
          for (size_t i = 0; i < n; ++i) {
            double acc = y[i];
            for (const auto& [kv, w] : terms) acc += h * w * (*kv)[i];
            yt[i] = acc;
          }
          sys(z + frac * h, yt, k);
        };
        stage(c2, k2, {{&k1, a21}});
        stage(c3, k3, {{&k1, a31}, {&k2, a32}});
        stage(c4, k4, {{&k1, a41}, {&k2, a42}, {&k3, a43}});
        stage(c5, k5, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}});
        stage(1.0, k6, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
        for (size_t i = 0; i < n; ++i)
          y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        sys(z + h, y5, k7);
        for (size_t i = 0; i < n; ++i) {
          double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);
          double scale = atol + rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
          err += (ei / scale) * (ei / scale);
        }
        err = std::sqrt(err / static_cast<double>(n));
        // 0/0 in the scaled estimate (zero tolerances, vanishing ei) must
        // reject the step, not poison h with NaN.
        if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
      } catch (const Error& e) {
        if (e.code() != ErrorCode::positivity_loss) throw;
        // A stage stepped over a zero of H; retry with a smaller step, and
        // only report PositivityLoss if no step is small enough.
        stage_failed = true;
      }

      if (!stage_failed && err <= 1.0) {
        z += h;
        y = y5;
        k1 = k7;  // FSAL
        ++accepted;
        for (size_t i = 0; i < n / 2; ++i)
          if (!(y[i] > 0))
            fail(ErrorCode::positivity_loss,
                 "H_" + std::to_string(i + 1) + " <= 0 at z = " + std::to_string(z));
        on_step(z, y);
        double factor = err == 0 ? 5.0 : 0.9 * std::pow(err, -0.2);
        h *= std::clamp(factor, 0.2, 5.0);
      } else {
        ++rejected;
        double factor = stage_failed ? 0.25 : std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
        h *= factor;
        if (h < h_min || rejected > 100000)
          fail(stage_failed ? ErrorCode::positivity_loss : ErrorCode::step_failure,
               stage_failed
                   ? "H reaches zero; cannot continue past the breakdown point"
                   : "step size underflow: requested tolerance is not achievable");
      }
    }
  }
};

std::span<const Rational> bind_values(const ModuliSolution& sol,
                                      std::span<const Rational> values) {
  // Numeric-mode coefficients are bound constants already (arity 0).
  if (sol.mode == SolveMode::numeric) return {};
  if (static_cast<int>(values.size()) != sol.arity())
    fail(ErrorCode::invalid_argument, "parameter values required for a symbolic solution");
  return values;
}

}  // namespace

OdeRun integrate_master_ode(const QuasiCartanMatrix& A, std::span<const Rational> B_s,
                            const ModuliSolution& sol, std::span<const Rational> values,
                            double z1, const OdeSettings& settings) {
  const int m = A.rank();
  if (static_cast<int>(B_s.size()) != m)
    fail(ErrorCode::invalid_argument, "one B_s per brane required");
  if (!(settings.z0 > 0) || !(z1 > settings.z0))
    fail(ErrorCode::invalid_argument, "need 0 < z0 < z1 (z = 0 is a singular point)");
  if (sol.order < settings.seed_order)
    fail(ErrorCode::invalid_argument,
         "solution order " + std::to_string(sol.order) + " is below the seed order " +
             std::to_string(settings.seed_order));
  std::span<const Rational> bind = bind_values(sol, values);

  MasterSystem sys;
  sys.m = m;
  for (int s = 0; s < m; ++s)
    for (int t = 0; t < m; ++t) sys.A.push_back(A.at(s, t).to_double());
  for (const Rational& b : B_s) sys.B.push_back(b.to_double());

  // Exact series evaluation at the (exactly represented) seed point.
  const Rational z0 = Rational::from_double_exact(settings.z0);
  std::vector<double> y0(static_cast<size_t>(2 * m));
  OdeRun run;
  for (int s = 0; s < m; ++s) {
    Series H = sol.brane_series(s, settings.seed_order);
    y0[s] = H.eval(z0, bind).to_double();
    y0[m + s] = H.derivative().eval(z0, bind).to_double();
    double leading = 1.0 + sol.numeric_coeff(s, 1, bind).to_double() * settings.z0;
    run.seed_deviation = std::max(run.seed_deviation, std::abs(y0[s] - leading));
  }

  run.B = sys.B;
  run.z0 = settings.z0;
  run.z1 = z1;
  run.rtol = settings.rtol;
  run.atol = settings.atol;

  Integrator ig(std::move(sys), std::move(y0), settings.z0, settings.rtol, settings.atol);
  run.trajectory.push_back({settings.z0, std::vector<double>(ig.y.begin(), ig.y.begin() + m)});
  ig.advance_to(z1, [&](double z, const std::vector<double>& y) {
    run.trajectory.push_back({z, std::vector<double>(y.begin(), y.begin() + m)});
  });
  run.accepted = ig.accepted;
  run.rejected = ig.rejected;
  run.H_end.assign(ig.y.begin(), ig.y.begin() + m);
  run.Hp_end.assign(ig.y.begin() + m, ig.y.end());
  return run;
}

nlohmann::json CrossValidation::to_json() const {
  nlohmann::json j;
  j["max_rel_dev"] = max_rel_dev;
  j["tolerance"] = tolerance;
  j["pass"] = pass;
  j["z0"] = z0;
  j["z1"] = z1;
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : points)
    pts.push_back({{"z", p.z}, {"ode", p.ode}, {"exact", p.exact}, {"rel_dev", p.rel_dev}});
  j["points"] = std::move(pts);
  return j;
}

CrossValidation cross_validate(const ModuliSolution& sol, std::span<const Rational> values,
                               std::span<const double> z_grid, double tolerance,
                               const OdeSettings& settings) {
  if (z_grid.empty()) fail(ErrorCode::invalid_argument, "empty evaluation grid");
  for (size_t i = 0; i < z_grid.size(); ++i)
    if (z_grid[i] <= settings.z0 || (i > 0 && z_grid[i] <= z_grid[i - 1]))
      fail(ErrorCode::invalid_argument, "grid must be ascending and beyond z0");
  std::span<const Rational> bind = bind_values(sol, values);

  const int m = sol.brane_count();
  std::vector<Rational> B_s;
  for (int s = 0; s < m; ++s) B_s.push_back(Rational(4) * sol.numeric_coeff(s, 1, bind));

  MasterSystem sys;
  sys.m = m;
  for (int s = 0; s < m; ++s)
    for (int t = 0; t < m; ++t) sys.A.push_back(sol.matrix.at(s, t).to_double());
  for (const Rational& b : B_s) sys.B.push_back(b.to_double());

  const Rational z0 = Rational::from_double_exact(settings.z0);
  std::vector<double> y0(static_cast<size_t>(2 * m));
  for (int s = 0; s < m; ++s) {
    Series H = sol.brane_series(s, std::min(settings.seed_order, sol.order));
    y0[s] = H.eval(z0, bind).to_double();
    y0[m + s] = H.derivative().eval(z0, bind).to_double();
  }

  CrossValidation cv;
  cv.tolerance = tolerance;
  cv.z0 = settings.z0;
  cv.z1 = z_grid.back();

  std::vector<Series> H;
  for (int s = 0; s < m; ++s) H.push_back(sol.brane_series(s, sol.order));

  Integrator ig(std::move(sys), std::move(y0), settings.z0, settings.rtol, settings.atol);
  for (double zg : z_grid) {
    ig.advance_to(zg, [](double, const std::vector<double>&) {});
    CrossValidationPoint pt;
    pt.z = zg;
    const Rational z_exact = Rational::from_double_exact(zg);
    for (int s = 0; s < m; ++s) {
      double ode = ig.y[s];
      double exact = H[s].eval(z_exact, bind).to_double();
      pt.ode.push_back(ode);
      pt.exact.push_back(exact);
      pt.rel_dev = std::max(pt.rel_dev, std::abs(ode - exact) / std::abs(exact));
    }
    cv.max_rel_dev = std::max(cv.max_rel_dev, pt.rel_dev);
    cv.points.push_back(std::move(pt));
  }
  cv.pass = cv.max_rel_dev <= tolerance;
  return cv;
}

}  // namespace tb
