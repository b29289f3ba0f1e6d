#pragma once

#include <limits>
#include <span>
#include <vector>

#include "lgvi/integrator.hpp"

namespace lgvi {

/// Boundary data and discretization of one minimum-torque maneuver: steer
/// from (R0, omega0) at t = 0 to RN at t = T with Omega_{N-1} = omegaNm1,
/// in N steps of size h = T/N.
struct ManeuverSpec {
  InertiaModel inertia;
  Mat3d R0, RN;
  Vec3d omega0, omegaNm1;
  double T{0};
  int N{0};

  double h() const { return T / N; }

  /// Throws std::invalid_argument on N < 3, T <= 0 or invalid rotations.
  void validate() const;

  /// Same maneuver re-discretized with a different step count.
  ManeuverSpec with_resolution(int n) const;
};

/// Unknowns of the square optimality system, packed as
///   [tau_1 .. tau_{N-1}, Omega_1 .. Omega_{N-2}]
/// (3(2N-3) reals). Residuals are packed as
///   [stationarity k=2..N-2, momentum k=1..N-1, closure].
inline int unknown_dim(int n) { return 3 * (2 * n - 3); }

inline int tau_offset(int /*n*/, int k) { return 3 * (k - 1); }
inline int omega_offset(int n, int k) { return 3 * (n - 1) + 3 * (k - 1); }
inline int stationarity_offset(int /*n*/, int k) { return 3 * (k - 2); }
inline int momentum_offset(int n, int k) { return 3 * (n - 3) + 3 * (k - 1); }
inline int closure_offset(int n) { return 3 * (2 * n - 4); }

template <class S>
Vec3<S> read_vec3(std::span<const S> x, int offset) {
  return {x[offset], x[offset + 1], x[offset + 2]};
}

template <class S>
void write_vec3(std::span<S> x, int offset, const Vec3<S>& v) {
  x[offset] = v.x;
  x[offset + 1] = v.y;
  x[offset + 2] = v.z;
}

/// Control effort sum_k (1/2) |tau_k|^2 over all N+1 torques.
double cost(const DiscreteTrajectory& traj);

/// Stationarity block with the exponentials A_{k-1} = exp(h Omega_{k-1}) and
/// A_k = exp(h Omega_k) precomputed, so the assembled system evaluates each
/// exponential once.
template <class S>
Vec3<S> residual_stationarity_cached(const InertiaModel& m, const Vec3<S>& omega_prev,
                                     const Vec3<S>& omega_k, const Vec3<S>& tau_prev,
                                     const Vec3<S>& tau_k, const Vec3<S>& tau_next,
                                     const Mat3<S>& a_prev, const Mat3<S>& a_k, double h) {
  // Ad_{A^{-1}} v = A^T v; Ad*_{A^{-1}} p = A p.
  const Vec3<S> atau_k = coadjoint(a_k, tau_k);           // A_k^T tau_k
  const Vec3<S> atau_prev = coadjoint(a_prev, tau_prev);  // A_{k-1}^T tau_{k-1}

  const Vec3<S> second_order = m.apply(tau_k) - a_k * m.apply(tau_next) - m.apply(atau_prev) +
                               a_k * m.apply(atau_k);
  const Vec3<S> commutators =
      a_k * cross(m.apply(omega_k), atau_k) - cross(m.apply(omega_prev), atau_prev);

  const double inv_h = 1.0 / h;
  return (-inv_h * inv_h) * second_order + (-inv_h) * commutators;
}

/// Stationarity block of the optimality system at index k (valid for
/// k = 2..N-2), in the vector form obtained from the hat-map identities:
/// with A_k = exp(h Omega_k),
///   -(1/h^2) [ I_b tau_k - Ad*_{A_k^{-1}} I_b tau_{k+1}
///              - I_b Ad_{A_{k-1}^{-1}} tau_{k-1}
///              + Ad*_{A_k^{-1}} I_b Ad_{A_k^{-1}} tau_k ]
///   -(1/h)   [ Ad*_{A_k^{-1}} (I_b Omega_k x Ad_{A_k^{-1}} tau_k)
///              - I_b Omega_{k-1} x Ad_{A_{k-1}^{-1}} tau_{k-1} ].
/// The matrix-commutator evaluation of the same equations lives in the test
/// suite and must agree with this form.
template <class S>
Vec3<S> residual_stationarity(const InertiaModel& m, const Vec3<S>& omega_prev,
                              const Vec3<S>& omega_k, const Vec3<S>& tau_prev,
                              const Vec3<S>& tau_k, const Vec3<S>& tau_next, double h) {
  const Mat3<S> a_prev = exp_so3(S(h) * omega_prev);
  const Mat3<S> a_k = exp_so3(S(h) * omega_k);
  return residual_stationarity_cached(m, omega_prev, omega_k, tau_prev, tau_k, tau_next, a_prev,
                                      a_k, h);
}

/// Momentum block: I_b Omega_k - exp(h Omega_k)^T (h tau_k + I_b Omega_{k-1}).
template <class S>
Vec3<S> residual_momentum(const InertiaModel& m, const Vec3<S>& omega_prev, const Vec3<S>& omega_k,
                          const Vec3<S>& tau_k, double h) {
  return momentum_defect(m, omega_prev, omega_k, tau_k, h);
}

/// Closure block: log(R_N^T R_0 exp(h Omega_0) ... exp(h Omega_{N-1})).
/// omega_all must carry all N angular velocities (boundary values included).
/// A defect angle within 1e-9 of pi throws BranchAmbiguousRotation.
template <class S>
Vec3<S> residual_closure(const ManeuverSpec& spec, std::span<const Vec3<S>> omega_all) {
  Mat3<S> defect = (spec.RN.transpose() * spec.R0) * Mat3<S>::identity();
  const double h = spec.h();
  for (const Vec3<S>& omega : omega_all) defect = defect * exp_so3(S(h) * omega);
  return log_so3(defect);
}

/// Full residual of the square system, with the boundary substitutions
/// Omega_0 = Omega_0*, Omega_{N-1} = Omega*_{N-1}, tau_0 = tau_N = 0.
/// x and out both have length 3(2N-3). A branch-ambiguous closure defect is
/// reported as a NaN-filled closure block so that line searches reject the
/// iterate instead of silently picking a branch.
template <class S>
void residual_full(const ManeuverSpec& spec, std::span<const S> x, std::span<S> out) {
  const int n = spec.N;
  const double h = spec.h();

  // Angular velocities with boundary substitution, then one exponential per node.
  std::vector<Vec3<S>> omega(n);
  omega[0] = Vec3<S>{S(spec.omega0.x), S(spec.omega0.y), S(spec.omega0.z)};
  omega[n - 1] = Vec3<S>{S(spec.omegaNm1.x), S(spec.omegaNm1.y), S(spec.omegaNm1.z)};
  for (int k = 1; k <= n - 2; ++k) omega[k] = read_vec3(x, omega_offset(n, k));

  std::vector<Mat3<S>> a(n);
  for (int k = 0; k < n; ++k) a[k] = exp_so3(S(h) * omega[k]);

  const Vec3<S> tau_zero{};
  auto tau_at = [&](int k) -> Vec3<S> {
    if (k == 0 || k == n) return tau_zero;
    return read_vec3(x, tau_offset(n, k));
  };

  for (int k = 2; k <= n - 2; ++k)
    write_vec3(out, stationarity_offset(n, k),
               residual_stationarity_cached(spec.inertia, omega[k - 1], omega[k], tau_at(k - 1),
                                            tau_at(k), tau_at(k + 1), a[k - 1], a[k], h));

  for (int k = 1; k <= n - 1; ++k) {
    const Vec3<S> rhs = S(h) * tau_at(k) + spec.inertia.apply(omega[k - 1]);
    write_vec3(out, momentum_offset(n, k), spec.inertia.apply(omega[k]) - coadjoint(a[k], rhs));
  }

  Mat3<S> defect = (spec.RN.transpose() * spec.R0) * Mat3<S>::identity();
  for (int k = 0; k < n; ++k) defect = defect * a[k];
  if (log_branch_ok(defect)) {
    write_vec3(out, closure_offset(n), log_so3(defect));
  } else {
    const S nan = S(std::numeric_limits<double>::quiet_NaN());
    write_vec3(out, closure_offset(n), Vec3<S>{nan, nan, nan});
  }
}

/// Lagrange multipliers of the constrained formulation, recovered from a
/// trajectory satisfying the momentum residuals:
///   Lambda2_k = (1/h) g_k^T tau_k                            (k = 1..N-1)
///   Lambda1_k = I_b Lambda2_k - I_b g_{k+1} Lambda2_{k+1}
///               + h (I_b Omega_k) x Lambda2_k                (k = 1..N-2)
struct MultiplierSequences {
  std::vector<Vec3d> lambda1;  // index 0 holds k = 1
  std::vector<Vec3d> lambda2;  // index 0 holds k = 1
};

MultiplierSequences recover_multipliers(const ManeuverSpec& spec, const DiscreteTrajectory& traj);

/// max_k |Lambda1_{k-1} - g_k Lambda1_k| over k = 2..N-2: the remaining
/// multiplier equation, which a converged solution satisfies.
double multiplier_consistency(const ManeuverSpec& spec, const DiscreteTrajectory& traj,
                              const MultiplierSequences& ms);

/// Build the trajectory corresponding to packed unknowns: attitudes from the
/// kinematic update, boundary values substituted, tau_0 = tau_N = 0.
DiscreteTrajectory trajectory_from_unknowns(const ManeuverSpec& spec, std::span<const double> x);

/// Pack a trajectory's interior torques and angular velocities into the
/// unknown layout (inverse of trajectory_from_unknowns).
std::vector<double> unknowns_from_trajectory(const ManeuverSpec& spec,
                                             const DiscreteTrajectory& traj);

}  // namespace lgvi
