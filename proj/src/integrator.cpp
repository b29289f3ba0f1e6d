#include "lgvi/integrator.hpp"

#include <cmath>

namespace lgvi {

Mat3d step_attitude(const Mat3d& r, const Vec3d& omega, double h) {
  return r * exp_so3(h * omega);
}

Vec3d step_momentum(const InertiaModel& m, const Vec3d& omega_prev, const Vec3d& tau, double h) {
  constexpr double tol = 1e-13;
  constexpr int max_iterations = 50;
  constexpr int max_halvings = 30;

  Vec3d omega = omega_prev;
  Vec3d f = momentum_defect(m, omega_prev, omega, tau, h);
  double fnorm = inf_norm(f);

  for (int it = 0; it < max_iterations; ++it) {
    if (fnorm <= tol) return omega;

    // Jacobian of the defect w.r.t. omega, one dual evaluation per column.
    Mat3d jac;
    const Vec3<Dual> prev_d{Dual(omega_prev.x), Dual(omega_prev.y), Dual(omega_prev.z)};
    const Vec3<Dual> tau_d{Dual(tau.x), Dual(tau.y), Dual(tau.z)};
    for (int c = 0; c < 3; ++c) {
      Vec3<Dual> om{Dual(omega.x), Dual(omega.y), Dual(omega.z)};
      om[c].d = 1.0;
      const Vec3<Dual> col = momentum_defect(m, prev_d, om, tau_d, h);
      jac(0, c) = col.x.d;
      jac(1, c) = col.y.d;
      jac(2, c) = col.z.d;
    }

    Vec3d delta;
    if (!solve3(jac, -f, delta))
      throw ImplicitStepFailure("implicit step failed: singular momentum Jacobian", fnorm);

    // Damping: halve the step until the defect norm decreases.
    double lambda = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < max_halvings; ++halving) {
      const Vec3d trial = omega + lambda * delta;
      const Vec3d ftrial = momentum_defect(m, omega_prev, trial, tau, h);
      const double ftnorm = inf_norm(ftrial);
      if (std::isfinite(ftnorm) && ftnorm < fnorm) {
        omega = trial;
        f = ftrial;
        fnorm = ftnorm;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted) throw ImplicitStepFailure("implicit step failed: damping exhausted", fnorm);
  }
  if (fnorm <= tol) return omega;
  throw ImplicitStepFailure("implicit step failed: no convergence in 50 iterations", fnorm);
}

Vec3d torque_from_step(const InertiaModel& m, const Vec3d& omega_prev, const Vec3d& omega_next,
                       double h) {
  const Vec3d momentum_next = exp_so3(h * omega_next) * m.apply(omega_next);
  return (1.0 / h) * (momentum_next - m.apply(omega_prev));
}

DiscreteTrajectory simulate(const InertiaModel& m, const Mat3d& r0, const Vec3d& omega0,
                            std::span<const Vec3d> interior_tau, double h) {
  if (h <= 0) throw std::invalid_argument("simulate: step size must be positive");
  const int n = static_cast<int>(interior_tau.size()) + 1;

  DiscreteTrajectory traj;
  traj.h = h;
  traj.R.reserve(n + 1);
  traj.omega.reserve(n);
  traj.tau.assign(n + 1, Vec3d{});
  for (int k = 1; k < n; ++k) traj.tau[k] = interior_tau[k - 1];

  DiscreteState s{r0, omega0, 0, h};
  traj.R.push_back(s.R);
  traj.omega.push_back(s.omega);
  for (int k = 1; k < n; ++k) {
    s.omega = step_momentum(m, s.omega, traj.tau[k], h);
    s.R = step_attitude(traj.R.back(), traj.omega.back(), h);
    s.k = k;
    traj.R.push_back(s.R);
    traj.omega.push_back(s.omega);
  }
  traj.R.push_back(step_attitude(traj.R.back(), traj.omega.back(), h));
  return traj;
}

double group_drift(const DiscreteTrajectory& traj) {
  double drift = 0;
  for (const Mat3d& r : traj.R)
    drift = std::max(drift, inf_norm(r.transpose() * r - Mat3d::identity()));
  return drift;
}

double spatial_momentum_drift(const InertiaModel& m, const DiscreteTrajectory& traj) {
  if (traj.steps() < 1) return 0;
  const Vec3d reference = traj.R[1] * m.apply(traj.omega[0]);
  double drift = 0;
  for (int k = 0; k < traj.steps(); ++k)
    drift = std::max(drift, inf_norm(traj.R[k + 1] * m.apply(traj.omega[k]) - reference));
  return drift;
}

double kinetic_energy(const InertiaModel& m, const Vec3d& omega) {
  return 0.5 * dot(m.apply(omega), omega);
}

}  // namespace lgvi
