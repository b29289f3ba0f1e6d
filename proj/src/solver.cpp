#include "lgvi/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lgvi {

namespace {

// Power of two near machine epsilon: the division by eps in the complex
// step is then exact.
constexpr double kComplexStepEps = 0x1p-53;
constexpr double kFiniteDifferenceStep = 1e-6;

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

void SolverOptions::validate() const {
  if (!(armijo_slope > 0 && armijo_slope < 1))
    throw std::invalid_argument("SolverOptions: armijo_slope must lie in (0, 1)");
  if (!(backtrack_factor > 0 && backtrack_factor < 1))
    throw std::invalid_argument("SolverOptions: backtrack_factor must lie in (0, 1)");
}

DerivativeMode derivative_mode_from_string(const std::string& name) {
  if (name == "dual") return DerivativeMode::dual;
  if (name == "complex-step") return DerivativeMode::complex_step;
  if (name == "finite-difference") return DerivativeMode::finite_difference;
  throw std::invalid_argument("unknown derivative mode '" + name +
                              "' (expected dual, complex-step or finite-difference)");
}

std::string to_string(DerivativeMode mode) {
  switch (mode) {
    case DerivativeMode::dual: return "dual";
    case DerivativeMode::complex_step: return "complex-step";
    case DerivativeMode::finite_difference: return "finite-difference";
  }
  return "?";
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::converged: return "converged";
    case SolveStatus::max_iterations: return "max iterations reached";
    case SolveStatus::line_search_failed: return "line search failed";
    case SolveStatus::singular_jacobian: return "singular Jacobian";
  }
  return "?";
}

ResidualFn maneuver_residual(const ManeuverSpec& spec) {
  return make_residual(unknown_dim(spec.N), [spec](auto x, auto out) {
    residual_full(spec, x, out);
  });
}

namespace {

void column_dual(const ResidualFn& f, const Eigen::VectorXd& x, int k, std::vector<Dual>& xbuf,
                 std::vector<Dual>& obuf, double* out) {
  const int n = f.dim;
  for (int i = 0; i < n; ++i) xbuf[i] = Dual(x[i]);
  xbuf[k].d = 1.0;
  f.eval_dual(std::span<const Dual>(xbuf), std::span<Dual>(obuf));
  for (int i = 0; i < n; ++i) out[i] = obuf[i].d;
}

void column_cstep(const ResidualFn& f, const Eigen::VectorXd& x, int k, std::vector<CStep>& xbuf,
                  std::vector<CStep>& obuf, double* out) {
  const int n = f.dim;
  for (int i = 0; i < n; ++i) xbuf[i] = CStep(x[i]);
  xbuf[k] = CStep(x[k], kComplexStepEps);
  f.eval_cstep(std::span<const CStep>(xbuf), std::span<CStep>(obuf));
  for (int i = 0; i < n; ++i) out[i] = obuf[i].imag() / kComplexStepEps;
}

void column_fd(const ResidualFn& f, const Eigen::VectorXd& x, int k, std::vector<double>& xbuf,
               std::vector<double>& plus, std::vector<double>& minus, double* out) {
  const int n = f.dim;
  for (int i = 0; i < n; ++i) xbuf[i] = x[i];
  xbuf[k] = x[k] + kFiniteDifferenceStep;
  f.eval_double(std::span<const double>(xbuf), std::span<double>(plus));
  xbuf[k] = x[k] - kFiniteDifferenceStep;
  f.eval_double(std::span<const double>(xbuf), std::span<double>(minus));
  for (int i = 0; i < n; ++i) out[i] = (plus[i] - minus[i]) / (2.0 * kFiniteDifferenceStep);
}

}  // namespace

Eigen::VectorXd directional_derivative(const ResidualFn& f, const Eigen::VectorXd& x, int k,
                                       DerivativeMode mode) {
  const int n = f.dim;
  Eigen::VectorXd col(n);
  switch (mode) {
    case DerivativeMode::dual: {
      std::vector<Dual> xbuf(n), obuf(n);
      column_dual(f, x, k, xbuf, obuf, col.data());
      break;
    }
    case DerivativeMode::complex_step: {
      std::vector<CStep> xbuf(n), obuf(n);
      column_cstep(f, x, k, xbuf, obuf, col.data());
      break;
    }
    case DerivativeMode::finite_difference: {
      std::vector<double> xbuf(n), plus(n), minus(n);
      column_fd(f, x, k, xbuf, plus, minus, col.data());
      break;
    }
  }
  return col;
}

namespace {

// Columns are independent; per-thread scratch buffers, disjoint writes.
// The parallel and serial paths therefore produce bit-identical matrices.
template <class MakeScratch, class Column>
void assemble_columns(int n, Eigen::MatrixXd& jac, bool parallel, MakeScratch make_scratch,
                      Column column) {
#ifdef _OPENMP
  if (parallel) {
#pragma omp parallel
    {
      auto scratch = make_scratch();
#pragma omp for schedule(static)
      for (int k = 0; k < n; ++k) column(scratch, k, jac.col(k).data());
    }
    return;
  }
#else
  (void)parallel;
#endif
  auto scratch = make_scratch();
  for (int k = 0; k < n; ++k) column(scratch, k, jac.col(k).data());
}

}  // namespace

Eigen::MatrixXd jacobian(const ResidualFn& f, const Eigen::VectorXd& x, DerivativeMode mode,
                         bool parallel) {
  const int n = f.dim;
  Eigen::MatrixXd jac(n, n);

  switch (mode) {
    case DerivativeMode::dual:
      assemble_columns(
          n, jac, parallel,
          [n] { return std::pair<std::vector<Dual>, std::vector<Dual>>(n, n); },
          [&](auto& s, int k, double* out) { column_dual(f, x, k, s.first, s.second, out); });
      break;
    case DerivativeMode::complex_step:
      assemble_columns(
          n, jac, parallel,
          [n] { return std::pair<std::vector<CStep>, std::vector<CStep>>(n, n); },
          [&](auto& s, int k, double* out) { column_cstep(f, x, k, s.first, s.second, out); });
      break;
    case DerivativeMode::finite_difference:
      assemble_columns(
          n, jac, parallel,
          [n] {
            return std::tuple<std::vector<double>, std::vector<double>, std::vector<double>>(n, n,
                                                                                             n);
          },
          [&](auto& s, int k, double* out) {
            column_fd(f, x, k, std::get<0>(s), std::get<1>(s), std::get<2>(s), out);
          });
      break;
  }
  return jac;
}

std::pair<Eigen::VectorXd, SolveReport> newton_armijo(const ResidualFn& f,
                                                      const Eigen::VectorXd& x0,
                                                      const SolverOptions& opts) {
  opts.validate();
  const auto t_start = std::chrono::steady_clock::now();
  const int n = f.dim;

  auto eval = [&f, n](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    out.resize(n);
    f.eval_double(std::span<const double>(x.data(), n), std::span<double>(out.data(), n));
  };

  SolveReport report;
  Eigen::VectorXd x = x0;
  Eigen::VectorXd fx(n);
  eval(x, fx);
  double fx_inf = inf_norm(fx);
  double fx_two = fx.norm();
  report.residual_history.push_back(fx_inf);
  report.merit_history.push_back(fx_two);

  Eigen::VectorXd best_x = x;
  double best_inf = fx_inf;

  auto finish = [&](SolveStatus status) {
    report.status = status;
    report.converged = status == SolveStatus::converged;
    report.final_residual = best_inf;
    report.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    return std::make_pair(best_x, report);
  };

  if (fx_inf <= opts.residual_tolerance) return finish(SolveStatus::converged);

  for (int it = 0; it < opts.max_newton_iterations; ++it) {
    const Eigen::MatrixXd jac = jacobian(f, x, opts.derivative_mode, opts.parallel_jacobian);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);

    const Eigen::VectorXd udiag = lu.matrixLU().diagonal().cwiseAbs();
    if (udiag.minCoeff() < 1e-14 * std::max(udiag.maxCoeff(), 1e-300))
      return finish(SolveStatus::singular_jacobian);

    const Eigen::VectorXd direction = lu.solve(-fx);

    double lambda = 1.0;
    int backtracks = 0;
    bool accepted = false;
    Eigen::VectorXd trial(n), ftrial(n);
    while (backtracks <= opts.max_backtracks) {
      trial = x + lambda * direction;
      eval(trial, ftrial);
      const double ftrial_two = ftrial.norm();
      if (std::isfinite(ftrial_two) && ftrial_two <= (1.0 - opts.armijo_slope * lambda) * fx_two) {
        accepted = true;
        break;
      }
      lambda *= opts.backtrack_factor;
      ++backtracks;
    }
    report.backtrack_counts.push_back(backtracks);
    if (!accepted) return finish(SolveStatus::line_search_failed);

    x = trial;
    fx = ftrial;
    fx_two = fx.norm();
    fx_inf = inf_norm(fx);
    ++report.iterations;
    report.residual_history.push_back(fx_inf);
    report.merit_history.push_back(fx_two);
    if (fx_inf < best_inf) {
      best_inf = fx_inf;
      best_x = x;
    }
    if (fx_inf <= opts.residual_tolerance) return finish(SolveStatus::converged);
  }
  return finish(SolveStatus::max_iterations);
}

Eigen::VectorXd initialize(const ManeuverSpec& spec, bool* used_fallback) {
  spec.validate();
  const int n = spec.N;
  const double h = spec.h();
  if (used_fallback) *used_fallback = false;

  // Velocity profile for all nodes 0..N-1, boundaries exact.
  std::vector<Vec3d> omega(n);
  const Mat3d relative = spec.R0.transpose() * spec.RN;

  auto blend_profile = [&](auto rate_at) {
    const int quarter = std::max(1, n / 4);
    for (int k = 0; k < n; ++k) {
      Vec3d v = rate_at(k);
      if (k <= quarter) {
        const double s = static_cast<double>(k) / quarter;
        v = (1.0 - s) * spec.omega0 + s * v;
      }
      const int tail_start = n - 1 - quarter;
      if (k >= tail_start) {
        const double s = static_cast<double>(k - tail_start) / (n - 1 - tail_start);
        v = (1.0 - s) * rate_at(k) + s * spec.omegaNm1;
        if (k <= quarter) {  // short horizons: both ramps overlap, just interpolate
          const double sh = static_cast<double>(k) / (n - 1);
          v = (1.0 - sh) * spec.omega0 + sh * spec.omegaNm1;
        }
      }
      omega[k] = v;
    }
  };

  if (log_branch_ok(relative)) {
    const Vec3d geodesic_rate = (1.0 / spec.T) * log_so3(relative);
    blend_profile([&](int) { return geodesic_rate; });
  } else {
    // Half-turn boundary pair: route through an intermediate attitude a
    // quarter turn from R0. A quarter turn about e fails only when e is
    // perpendicular to the half-turn axis, so one of the three basis axes
    // always gives two resolvable segments.
    if (used_fallback) *used_fallback = true;
    Vec3d rate1, rate2;
    bool resolved = false;
    for (int axis = 0; axis < 3 && !resolved; ++axis) {
      Vec3d quarter{};
      quarter[axis] = M_PI / 2;
      const Mat3d mid = exp_so3(quarter) * spec.R0;
      const Mat3d leg2 = mid.transpose() * spec.RN;
      if (!log_branch_ok(leg2)) continue;
      rate1 = (2.0 / spec.T) * log_so3(spec.R0.transpose() * mid);
      rate2 = (2.0 / spec.T) * log_so3(leg2);
      resolved = true;
    }
    if (!resolved)
      throw std::runtime_error("initialize: no resolvable two-segment path");  // unreachable
    blend_profile([&](int k) { return k < n / 2 ? rate1 : rate2; });
  }

  std::vector<double> x(unknown_dim(n), 0.0);
  std::span<double> xs(x);
  for (int k = 1; k <= n - 2; ++k) write_vec3(xs, omega_offset(n, k), omega[k]);
  for (int k = 1; k <= n - 1; ++k)
    write_vec3(xs, tau_offset(n, k), torque_from_step(spec.inertia, omega[k - 1], omega[k], h));

  return Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<int>(x.size()));
}

ManeuverSolution solve_maneuver(const ManeuverSpec& spec, const SolverOptions& opts) {
  bool fallback = false;
  const Eigen::VectorXd x0 = initialize(spec, &fallback);
  const ResidualFn f = maneuver_residual(spec);
  auto [x, report] = newton_armijo(f, x0, opts);
  report.fallback_initialization = fallback;

  ManeuverSolution solution;
  solution.trajectory =
      trajectory_from_unknowns(spec, std::span<const double>(x.data(), x.size()));
  solution.cost = cost(solution.trajectory);
  solution.x = std::move(x);
  solution.report = std::move(report);
  return solution;
}

}  // namespace lgvi
