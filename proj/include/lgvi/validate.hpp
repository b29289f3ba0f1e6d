#pragma once

#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lgvi/solver.hpp"

namespace lgvi {

/// Named metrics plus failure/skip notes from a validation run. Metric order
/// is deterministic so reports compare byte for byte.
struct ValidationReport {
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  bool passed() const { return failures.empty(); }
  void add(const std::string& name, double v) { metrics.emplace_back(name, v); }
};

/// Which checks to run.
struct ValidationSelection {
  bool equivariance = true;
  bool refinement = true;
  bool oracle = true;
  bool continuous = true;
  bool multipliers = true;
};

ValidationSelection selection_from_list(const std::string& comma_separated);

/// Uniformly distributed random rotation (axis from the sphere, angle in
/// [0, pi)); deterministic given the generator state.
Mat3d random_rotation(std::mt19937_64& rng);

/// Solves the maneuver as given and with both boundary attitudes rotated by
/// Q, then returns the worst body-frame discrepancy
///   max_k max(|tau_k - tau_k^rot|_inf, |Omega_k - Omega_k^rot|_inf).
/// Body quantities are invariant under the rotation; attitudes satisfy
/// R_k^rot = Q R_k. Throws std::runtime_error naming which solve failed.
double check_equivariance(const ManeuverSpec& spec, const Mat3d& q, const SolverOptions& opts = {});
double check_equivariance(const ManeuverSolution& base, const ManeuverSpec& spec, const Mat3d& q,
                          const SolverOptions& opts = {});

/// Solves at N and N/2 and returns the relative sup-norm difference between
/// the coarse Omega/tau sequences and the fine ones subsampled at matching
/// times. Requires N even.
double check_refinement(const ManeuverSpec& spec, const SolverOptions& opts = {});
double check_refinement(const ManeuverSolution& fine, const ManeuverSpec& spec,
                        const SolverOptions& opts = {});

/// Brute-force reference optimizer for small instances (N <= 8): minimizes
/// the torque cost over interior torques with forward simulation for the
/// dynamics, quadratic penalties (weights 1e2, 1e4, ..., 1e10) on the
/// terminal attitude and velocity defects, and backtracking gradient descent
/// with central-difference gradients. Independent of the Newton path.
/// Throws OracleInfeasible when the final violation exceeds 1e-6.
std::pair<DiscreteTrajectory, double> oracle_minimize(const ManeuverSpec& spec);

/// Finite-difference residual of the continuous fourth-order necessary
/// condition, evaluated on each discrete solution at its interior nodes;
/// returns one infinity norm per solution. With sigma = tau and
/// eta = I_b (Omega x sigma), the residual is
///   I_b sigma'' - (I_b sigma') x Omega + eta' - d/dt((I_b Omega) x sigma)
///   + 1/4 ((I_b sigma) x Omega) x Omega + ((I_b Omega) x sigma) x Omega
///   - eta x Omega,
/// with time derivatives by central differences. The sequence should be
/// nonincreasing as the resolution grows.
std::vector<double> check_continuous_consistency(std::span<const DiscreteTrajectory> solutions,
                                                 const InertiaModel& inertia);

/// Worst residual of the remaining multiplier equation on a converged
/// solution (recover_multipliers + multiplier_consistency).
double multiplier_residual(const ManeuverSpec& spec, const DiscreteTrajectory& traj);

/// Runs the selected checks plus the always-on structure baselines
/// (group drift and torque-free spatial momentum drift), collecting metrics
/// and threshold failures.
ValidationReport run_validation(const ManeuverSpec& spec, const ValidationSelection& sel,
                                const SolverOptions& opts = {});

// Acceptance thresholds for the individual checks.
inline constexpr double kEquivarianceTol = 1e-8;
inline constexpr double kRefinementTol = 0.05;
inline constexpr double kOracleGapTol = 1e-3;
inline constexpr double kOracleStationarityTol = 1e-3;
inline constexpr double kMultiplierTol = 1e-8;
inline constexpr double kGroupDriftTol = 1e-10;
inline constexpr double kMomentumDriftTol = 1e-10;

}  // namespace lgvi
