#include "lgvi/validate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lgvi {

namespace {

double sup_norm(std::span<const Vec3d> seq) {
  double n = 0;
  for (const Vec3d& v : seq) n = std::max(n, inf_norm(v));
  return n;
}

double sup_diff(std::span<const Vec3d> a, std::span<const Vec3d> b) {
  double n = 0;
  for (size_t i = 0; i < a.size(); ++i) n = std::max(n, inf_norm(a[i] - b[i]));
  return n;
}

}  // namespace

ValidationSelection selection_from_list(const std::string& comma_separated) {
  ValidationSelection sel{false, false, false, false, false};
  std::stringstream ss(comma_separated);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (item == "equivariance")
      sel.equivariance = true;
    else if (item == "refinement")
      sel.refinement = true;
    else if (item == "oracle")
      sel.oracle = true;
    else if (item == "continuous")
      sel.continuous = true;
    else if (item == "multipliers")
      sel.multipliers = true;
    else if (item == "all")
      sel = ValidationSelection{};
    else
      throw std::invalid_argument("unknown validation check '" + item + "'");
  }
  return sel;
}

Mat3d random_rotation(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vec3d axis;
  double n2;
  do {
    axis = {unit(rng), unit(rng), unit(rng)};
    n2 = dot(axis, axis);
  } while (n2 < 1e-6 || n2 > 1.0);
  std::uniform_real_distribution<double> angle(0.0, M_PI - 0.1);
  return exp_so3((angle(rng) / std::sqrt(n2)) * axis);
}

double check_equivariance(const ManeuverSolution& base, const ManeuverSpec& spec, const Mat3d& q,
                          const SolverOptions& opts) {
  if (!base.report.converged)
    throw std::runtime_error("equivariance: baseline solve did not converge");

  ManeuverSpec rotated = spec;
  rotated.R0 = q * spec.R0;
  rotated.RN = q * spec.RN;
  const ManeuverSolution rot = solve_maneuver(rotated, opts);
  if (!rot.report.converged)
    throw std::runtime_error("equivariance: rotated solve did not converge");

  double metric = 0;
  for (int k = 0; k <= spec.N; ++k)
    metric = std::max(metric, inf_norm(base.trajectory.tau[k] - rot.trajectory.tau[k]));
  for (int k = 0; k < spec.N; ++k)
    metric = std::max(metric, inf_norm(base.trajectory.omega[k] - rot.trajectory.omega[k]));
  return metric;
}

double check_equivariance(const ManeuverSpec& spec, const Mat3d& q, const SolverOptions& opts) {
  const ManeuverSolution base = solve_maneuver(spec, opts);
  return check_equivariance(base, spec, q, opts);
}

double check_refinement(const ManeuverSolution& fine, const ManeuverSpec& spec,
                        const SolverOptions& opts) {
  if (spec.N % 2 != 0 || spec.N / 2 < 3)
    throw std::invalid_argument("check_refinement: N must be even with N/2 >= 3");
  if (!fine.report.converged)
    throw std::runtime_error("refinement: fine solve did not converge");

  const ManeuverSpec coarse_spec = spec.with_resolution(spec.N / 2);
  const ManeuverSolution coarse = solve_maneuver(coarse_spec, opts);
  if (!coarse.report.converged)
    throw std::runtime_error("refinement: coarse solve did not converge");

  const int nc = coarse_spec.N;
  std::vector<Vec3d> fine_omega(nc), fine_tau(nc + 1), coarse_omega(nc), coarse_tau(nc + 1);
  for (int k = 0; k < nc; ++k) {
    coarse_omega[k] = coarse.trajectory.omega[k];
    fine_omega[k] = fine.trajectory.omega[2 * k];
  }
  for (int k = 0; k <= nc; ++k) {
    coarse_tau[k] = coarse.trajectory.tau[k];
    fine_tau[k] = fine.trajectory.tau[2 * k];
  }

  const double scale = std::max({sup_norm(fine_omega), sup_norm(fine_tau), 1e-12});
  return std::max(sup_diff(coarse_omega, fine_omega), sup_diff(coarse_tau, fine_tau)) / scale;
}

double check_refinement(const ManeuverSpec& spec, const SolverOptions& opts) {
  return check_refinement(solve_maneuver(spec, opts), spec, opts);
}

namespace {

// Terminal constraint violation of a simulated trajectory (squared for the
// penalty, max norm for the feasibility decision).
struct OracleObjective {
  const ManeuverSpec& spec;

  DiscreteTrajectory simulate_torques(std::span<const double> theta) const {
    const int n = spec.N;
    std::vector<Vec3d> interior(n - 1);
    for (int k = 0; k < n - 1; ++k)
      interior[k] = {theta[3 * k], theta[3 * k + 1], theta[3 * k + 2]};
    return simulate(spec.inertia, spec.R0, spec.omega0, interior, spec.h());
  }

  // (cost, violation^2); violation_out (if given) gets max(|log defect|, |dOmega|).
  double penalized(std::span<const double> theta, double mu, double* violation_out = nullptr) const {
    const DiscreteTrajectory traj = simulate_torques(theta);
    const Mat3d defect = traj.R[spec.N].transpose() * spec.RN;
    if (!log_branch_ok(defect)) {
      if (violation_out) *violation_out = M_PI;
      return 1e30;
    }
    const Vec3d attitude_defect = log_so3(defect);
    const Vec3d omega_defect = traj.omega[spec.N - 1] - spec.omegaNm1;
    const double v2 = dot(attitude_defect, attitude_defect) + dot(omega_defect, omega_defect);
    if (violation_out)
      *violation_out = std::max(norm(attitude_defect), norm(omega_defect));
    return cost(traj) + mu * v2;
  }
};

}  // namespace

std::pair<DiscreteTrajectory, double> oracle_minimize(const ManeuverSpec& spec) {
  spec.validate();
  if (spec.N > 8)
    throw std::invalid_argument("oracle_minimize: exhaustive oracle limited to N <= 8");

  const OracleObjective objective{spec};
  const int dim = 3 * (spec.N - 1);
  std::vector<double> theta(dim, 0.0), grad(dim), trial(dim), probe(dim);

  double step = 0.1;
  for (double mu : {1e2, 1e4, 1e6, 1e8, 1e10}) {
    const int max_iterations = 5000;
    double phi = objective.penalized(theta, mu);
    for (int it = 0; it < max_iterations; ++it) {
      // Central-difference gradient, independent of the dual-number machinery.
      double gnorm2 = 0;
      probe = theta;
      for (int i = 0; i < dim; ++i) {
        const double delta = 1e-6 * std::max(1.0, std::abs(theta[i]));
        probe[i] = theta[i] + delta;
        const double fp = objective.penalized(probe, mu);
        probe[i] = theta[i] - delta;
        const double fm = objective.penalized(probe, mu);
        probe[i] = theta[i];
        grad[i] = (fp - fm) / (2.0 * delta);
        gnorm2 += grad[i] * grad[i];
      }
      if (gnorm2 <= 1e-24 * (1.0 + mu)) break;

      // Backtracking line search with an adaptive starting step.
      bool accepted = false;
      for (int bt = 0; bt < 60; ++bt) {
        for (int i = 0; i < dim; ++i) trial[i] = theta[i] - step * grad[i];
        const double phi_trial = objective.penalized(trial, mu);
        if (phi_trial <= phi - 1e-4 * step * gnorm2) {
          theta = trial;
          phi = phi_trial;
          accepted = true;
          step *= 2.0;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) break;  // step underflow: stage converged to rounding
    }
  }

  double violation = 0;
  const double final_cost = objective.penalized(theta, 0.0, &violation);
  if (violation > 1e-6)
    throw OracleInfeasible("oracle infeasible: terminal violation " + std::to_string(violation));
  return {objective.simulate_torques(theta), final_cost};
}

std::vector<double> check_continuous_consistency(std::span<const DiscreteTrajectory> solutions,
                                                 const InertiaModel& inertia) {
  if (solutions.size() < 2)
    throw std::invalid_argument("check_continuous_consistency: need at least two resolutions");

  std::vector<double> norms;
  norms.reserve(solutions.size());
  for (const DiscreteTrajectory& traj : solutions) {
    const int n = traj.steps();
    const double h = traj.h;

    auto sigma = [&](int k) { return traj.tau[k]; };
    auto momentum = [&](int k) { return inertia.apply(traj.omega[k]); };
    auto eta = [&](int k) { return inertia.apply(cross(traj.omega[k], sigma(k))); };

    double worst = 0;
    for (int k = 2; k <= n - 2; ++k) {
      const Vec3d sigma_dot = (1.0 / (2.0 * h)) * (sigma(k + 1) - sigma(k - 1));
      const Vec3d sigma_ddot =
          (1.0 / (h * h)) * (sigma(k + 1) - 2.0 * sigma(k) + sigma(k - 1));
      const Vec3d eta_dot = (1.0 / (2.0 * h)) * (eta(k + 1) - eta(k - 1));
      const Vec3d momentum_dot = (1.0 / (2.0 * h)) * (momentum(k + 1) - momentum(k - 1));

      const Vec3d& omega = traj.omega[k];
      // d/dt(ad*_sigma M) = Mdot x sigma + M x sigmadot
      const Vec3d transport_dot = cross(momentum_dot, sigma(k)) + cross(momentum(k), sigma_dot);
      const Vec3d residual = inertia.apply(sigma_ddot) - cross(inertia.apply(sigma_dot), omega) +
                             eta_dot - transport_dot +
                             0.25 * cross(cross(inertia.apply(sigma(k)), omega), omega) +
                             cross(cross(momentum(k), sigma(k)), omega) - cross(eta(k), omega);
      worst = std::max(worst, inf_norm(residual));
    }
    norms.push_back(worst);
  }
  return norms;
}

double multiplier_residual(const ManeuverSpec& spec, const DiscreteTrajectory& traj) {
  return multiplier_consistency(spec, traj, recover_multipliers(spec, traj));
}

ValidationReport run_validation(const ManeuverSpec& spec, const ValidationSelection& sel,
                                const SolverOptions& opts) {
  spec.validate();
  ValidationReport report;

  const ManeuverSolution base = solve_maneuver(spec, opts);
  if (!base.report.converged)
    report.failures.push_back("baseline solve: " + to_string(base.report.status));
  report.add("baseline_final_residual", base.report.final_residual);
  report.add("baseline_cost", base.cost);

  // Structure baselines: group drift of the solved path, spatial momentum
  // drift of a torque-free run with the same inertia and step.
  const double gdrift = group_drift(base.trajectory);
  report.add("group_drift", gdrift);
  if (gdrift > kGroupDriftTol) report.failures.push_back("group drift exceeds 1e-10");

  Vec3d spin = spec.omega0;
  if (norm(spin) < 1e-12) spin = spec.omegaNm1;
  if (norm(spin) < 1e-12) spin = Vec3d{0.3, 0.2, 0.3};
  const std::vector<Vec3d> no_torque(999, Vec3d{});
  const DiscreteTrajectory free_run = simulate(spec.inertia, spec.R0, spin, no_torque, spec.h());
  const double mdrift = spatial_momentum_drift(spec.inertia, free_run);
  report.add("momentum_drift", mdrift);
  if (mdrift > kMomentumDriftTol) report.failures.push_back("momentum drift exceeds 1e-10");

  if (sel.equivariance) {
    std::mt19937_64 rng(20260810u);
    double worst = 0;
    try {
      for (int i = 0; i < 3; ++i)
        worst = std::max(worst, check_equivariance(base, spec, random_rotation(rng), opts));
      report.add("equivariance_error", worst);
      if (worst > kEquivarianceTol) report.failures.push_back("equivariance error exceeds 1e-8");
    } catch (const std::exception& e) {
      report.failures.push_back(e.what());
    }
  }

  if (sel.refinement) {
    if (spec.N % 2 != 0 || spec.N / 2 < 3) {
      report.notes.push_back("refinement: skipped (requires even N with N/2 >= 3)");
    } else {
      try {
        const double err = check_refinement(base, spec, opts);
        report.add("refinement_error", err);
        if (err > kRefinementTol) report.failures.push_back("refinement error exceeds 0.05");
      } catch (const std::exception& e) {
        report.failures.push_back(e.what());
      }
    }
  }

  if (sel.oracle) {
    if (spec.N > 8) {
      report.notes.push_back("oracle: skipped (requires N <= 8)");
    } else {
      try {
        const auto [oracle_traj, oracle_cost] = oracle_minimize(spec);
        const double gap =
            std::abs(base.cost - oracle_cost) / std::max(oracle_cost, 1e-12);
        report.add("oracle_cost_gap", gap);
        if (gap > kOracleGapTol) report.failures.push_back("oracle cost gap exceeds 1e-3");

        const std::vector<double> x = unknowns_from_trajectory(spec, oracle_traj);
        std::vector<double> res(unknown_dim(spec.N));
        residual_full<double>(spec, x, res);
        double stationarity = 0;
        for (int k = 2; k <= spec.N - 2; ++k)
          for (int c = 0; c < 3; ++c)
            stationarity =
                std::max(stationarity, std::abs(res[stationarity_offset(spec.N, k) + c]));
        report.add("oracle_stationarity", stationarity);
        if (stationarity > kOracleStationarityTol)
          report.failures.push_back("oracle stationarity residual exceeds 1e-3");
      } catch (const std::exception& e) {
        report.failures.push_back(e.what());
      }
    }
  }

  if (sel.continuous) {
    if (spec.N % 4 != 0 || spec.N / 4 < 4) {
      report.notes.push_back("continuous: skipped (requires N divisible by 4 with N/4 >= 4)");
    } else {
      try {
        const ManeuverSolution quarter = solve_maneuver(spec.with_resolution(spec.N / 4), opts);
        const ManeuverSolution half = solve_maneuver(spec.with_resolution(spec.N / 2), opts);
        if (!quarter.report.converged || !half.report.converged)
          throw std::runtime_error("continuous: coarse solve did not converge");
        const DiscreteTrajectory trajs[3] = {quarter.trajectory, half.trajectory,
                                             base.trajectory};
        const std::vector<double> norms = check_continuous_consistency(trajs, spec.inertia);
        report.add("continuous_residual_N" + std::to_string(spec.N / 4), norms[0]);
        report.add("continuous_residual_N" + std::to_string(spec.N / 2), norms[1]);
        report.add("continuous_residual_N" + std::to_string(spec.N), norms[2]);
        if (!(norms[0] >= norms[1] && norms[1] >= norms[2]))
          report.failures.push_back("continuous-consistency norms are not nonincreasing");
      } catch (const std::exception& e) {
        report.failures.push_back(e.what());
      }
    }
  }

  if (sel.multipliers) {
    const double res = multiplier_residual(spec, base.trajectory);
    report.add("multiplier_residual", res);
    if (res > kMultiplierTol) report.failures.push_back("multiplier residual exceeds 1e-8");
  }

  return report;
}

}  // namespace lgvi
