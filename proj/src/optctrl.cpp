#include "lgvi/optctrl.hpp"

#include <cmath>
#include <stdexcept>

namespace lgvi {

void ManeuverSpec::validate() const {
  if (N < 3) throw std::invalid_argument("ManeuverSpec: N must be at least 3");
  if (!(T > 0)) throw std::invalid_argument("ManeuverSpec: horizon T must be positive");
  require_rotation(R0, 1e-9, "ManeuverSpec R0");
  require_rotation(RN, 1e-9, "ManeuverSpec RN");
}

ManeuverSpec ManeuverSpec::with_resolution(int n) const {
  ManeuverSpec s = *this;
  s.N = n;
  return s;
}

double cost(const DiscreteTrajectory& traj) {
  double total = 0;
  for (const Vec3d& t : traj.tau) total += 0.5 * dot(t, t);
  return total;
}

MultiplierSequences recover_multipliers(const ManeuverSpec& spec, const DiscreteTrajectory& traj) {
  const int n = spec.N;
  const double h = spec.h();
  const InertiaModel& m = spec.inertia;

  std::vector<Mat3d> g(n);
  for (int k = 0; k < n; ++k) g[k] = exp_so3(h * traj.omega[k]);

  MultiplierSequences ms;
  ms.lambda2.resize(n - 1);
  for (int k = 1; k <= n - 1; ++k)
    ms.lambda2[k - 1] = (1.0 / h) * adjoint(g[k].transpose(), traj.tau[k]);

  ms.lambda1.resize(n - 2);
  for (int k = 1; k <= n - 2; ++k) {
    const Vec3d& l2_k = ms.lambda2[k - 1];
    const Vec3d& l2_next = ms.lambda2[k];
    ms.lambda1[k - 1] =
        m.apply(l2_k) - m.apply(adjoint(g[k + 1], l2_next)) + h * cross(m.apply(traj.omega[k]), l2_k);
  }
  return ms;
}

double multiplier_consistency(const ManeuverSpec& spec, const DiscreteTrajectory& traj,
                              const MultiplierSequences& ms) {
  const int n = spec.N;
  const double h = spec.h();
  double worst = 0;
  for (int k = 2; k <= n - 2; ++k) {
    const Mat3d g_k = exp_so3(h * traj.omega[k]);
    worst = std::max(worst, inf_norm(ms.lambda1[k - 2] - g_k * ms.lambda1[k - 1]));
  }
  return worst;
}

DiscreteTrajectory trajectory_from_unknowns(const ManeuverSpec& spec, std::span<const double> x) {
  const int n = spec.N;
  const double h = spec.h();

  DiscreteTrajectory traj;
  traj.h = h;
  traj.omega.resize(n);
  traj.tau.assign(n + 1, Vec3d{});
  traj.omega[0] = spec.omega0;
  traj.omega[n - 1] = spec.omegaNm1;
  for (int k = 1; k <= n - 2; ++k) traj.omega[k] = read_vec3(x, omega_offset(n, k));
  for (int k = 1; k <= n - 1; ++k) traj.tau[k] = read_vec3(x, tau_offset(n, k));

  traj.R.resize(n + 1);
  traj.R[0] = spec.R0;
  for (int k = 0; k < n; ++k) traj.R[k + 1] = step_attitude(traj.R[k], traj.omega[k], h);
  return traj;
}

std::vector<double> unknowns_from_trajectory(const ManeuverSpec& spec,
                                             const DiscreteTrajectory& traj) {
  const int n = spec.N;
  std::vector<double> x(unknown_dim(n), 0.0);
  std::span<double> xs(x);
  for (int k = 1; k <= n - 1; ++k) write_vec3(xs, tau_offset(n, k), traj.tau[k]);
  for (int k = 1; k <= n - 2; ++k) write_vec3(xs, omega_offset(n, k), traj.omega[k]);
  return x;
}

}  // namespace lgvi
