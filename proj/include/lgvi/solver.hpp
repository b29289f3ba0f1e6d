#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lgvi/optctrl.hpp"

namespace lgvi {

enum class DerivativeMode { dual, complex_step, finite_difference };

DerivativeMode derivative_mode_from_string(const std::string& name);
std::string to_string(DerivativeMode mode);

struct SolverOptions {
  double residual_tolerance = 1e-10;  // infinity norm
  int max_newton_iterations = 200;
  double armijo_slope = 1e-4;
  double backtrack_factor = 0.5;
  int max_backtracks = 40;
  DerivativeMode derivative_mode = DerivativeMode::dual;
  bool parallel_jacobian = true;  // OpenMP column assembly; serial path kept for reference

  void validate() const;
};

enum class SolveStatus { converged, max_iterations, line_search_failed, singular_jacobian };

std::string to_string(SolveStatus status);

struct SolveReport {
  bool converged = false;
  SolveStatus status = SolveStatus::max_iterations;
  int iterations = 0;
  double final_residual = 0;             // infinity norm at the returned iterate
  std::vector<double> residual_history;  // infinity norms, length iterations + 1
  std::vector<double> merit_history;     // 2-norms (the Armijo merit), same length
  std::vector<int> backtrack_counts;     // per accepted/attempted iteration
  double wall_time_s = 0;
  bool fallback_initialization = false;  // two-segment initial guess was used
};

/// A square nonlinear system evaluatable on double, Dual and CStep inputs.
/// The three evaluators must compute the same formulas; make_residual fills
/// them from a single generic callable.
struct ResidualFn {
  int dim = 0;
  std::function<void(std::span<const double>, std::span<double>)> eval_double;
  std::function<void(std::span<const Dual>, std::span<Dual>)> eval_dual;
  std::function<void(std::span<const CStep>, std::span<CStep>)> eval_cstep;
};

template <class F>
ResidualFn make_residual(int dim, F f) {
  ResidualFn r;
  r.dim = dim;
  r.eval_double = [f](std::span<const double> x, std::span<double> out) { f(x, out); };
  r.eval_dual = [f](std::span<const Dual> x, std::span<Dual> out) { f(x, out); };
  r.eval_cstep = [f](std::span<const CStep> x, std::span<CStep> out) { f(x, out); };
  return r;
}

/// The optimality system of a maneuver as a ResidualFn.
ResidualFn maneuver_residual(const ManeuverSpec& spec);

/// k-th Jacobian column by machine-precision directional differentiation
/// (dual forward mode or complex step), or by a central finite difference
/// when that mode is selected explicitly.
Eigen::VectorXd directional_derivative(const ResidualFn& f, const Eigen::VectorXd& x, int k,
                                       DerivativeMode mode = DerivativeMode::dual);

/// Dense Jacobian, one directional derivative per column. Columns are
/// independent, so the parallel path distributes them over OpenMP threads
/// and produces the same matrix bit for bit as the serial reference.
Eigen::MatrixXd jacobian(const ResidualFn& f, const Eigen::VectorXd& x,
                         DerivativeMode mode = DerivativeMode::dual, bool parallel = true);

/// Newton iteration with Armijo backtracking on the residual 2-norm:
/// solve J d = -F by partial-pivot LU, accept x + lambda d once
/// |F(x + lambda d)| <= (1 - alpha lambda) |F(x)|, halving lambda as needed.
/// Nonfinite trial residuals are rejected like failed descent. Stops when
/// |F|_inf <= residual_tolerance; always returns the best iterate seen.
std::pair<Eigen::VectorXd, SolveReport> newton_armijo(const ResidualFn& f,
                                                      const Eigen::VectorXd& x0,
                                                      const SolverOptions& opts);

/// Initial guess: a constant geodesic rate log(R0^T RN)/T blended linearly
/// into the boundary velocities over the first and last quarter of the
/// horizon; torques from torque_from_step, which makes every momentum block
/// vanish at the initial point. A half-turn boundary pair falls back to a
/// two-segment path through exp(pi/2 e1) R0 (reported via used_fallback).
Eigen::VectorXd initialize(const ManeuverSpec& spec, bool* used_fallback = nullptr);

struct ManeuverSolution {
  Eigen::VectorXd x;
  DiscreteTrajectory trajectory;
  SolveReport report;
  double cost = 0;
};

/// initialize + newton_armijo + trajectory assembly.
ManeuverSolution solve_maneuver(const ManeuverSpec& spec, const SolverOptions& opts = {});

}  // namespace lgvi
