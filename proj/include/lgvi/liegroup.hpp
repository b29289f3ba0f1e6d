#pragma once

#include <cmath>

#include "lgvi/cstep.hpp"
#include "lgvi/dual.hpp"
#include "lgvi/errors.hpp"
#include "lgvi/linalg.hpp"

namespace lgvi {

inline constexpr double kSmallAngle = 1e-4;     // switch to series coefficients below this
inline constexpr double kBranchMargin = 1e-9;   // log rejects angles within this of pi
inline constexpr double kSymmetricAxisCut = 3.0;  // above this angle, extract axis from R + R^T

/// hat map: 3-vector -> skew-symmetric matrix, hat(v) * w = v x w.
template <class S>
Mat3<S> hat(const Vec3<S>& v) {
  Mat3<S> a;
  a(0, 1) = -v.z;
  a(0, 2) = v.y;
  a(1, 0) = v.z;
  a(1, 2) = -v.x;
  a(2, 0) = -v.y;
  a(2, 1) = v.x;
  return a;
}

/// vee map, inverse of hat. Rejects matrices whose skew defect exceeds 1e-9.
template <class S>
Vec3<S> vee(const Mat3<S>& a) {
  using std::abs;
  const double defect =
      std::max({std::abs(value(a(0, 1)) + value(a(1, 0))),
                std::abs(value(a(0, 2)) + value(a(2, 0))),
                std::abs(value(a(1, 2)) + value(a(2, 1))),
                std::abs(value(a(0, 0))), std::abs(value(a(1, 1))), std::abs(value(a(2, 2)))});
  if (defect > 1e-9) throw std::invalid_argument("vee: input is not skew-symmetric");
  return {a(2, 1), a(0, 2), a(1, 0)};
}

/// Exponential map so(3) -> SO(3), Rodrigues form. Below kSmallAngle the
/// sin(t)/t and 2 sin^2(t/2)/t^2 coefficients use their 4th-order series in
/// t^2, so the whole map stays smooth in the matrix entries and directional
/// derivatives flow through both branches.
template <class S>
Mat3<S> exp_so3(const Vec3<S>& v) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  const S t2 = dot(v, v);
  S a, b;  // R = I + a*hat(v) + b*hat(v)^2
  if (t2 < S(kSmallAngle * kSmallAngle)) {
    a = S(1) - t2 * S(1.0 / 6.0) + t2 * t2 * S(1.0 / 120.0);
    b = S(0.5) - t2 * S(1.0 / 24.0) + t2 * t2 * S(1.0 / 720.0);
  } else {
    const S t = sqrt(t2);
    const S st = sin(t * S(0.5));
    a = sin(t) / t;
    b = S(2) * st * st / t2;
  }
  const Mat3<S> vh = hat(v);
  return Mat3<S>::identity() + a * vh + b * (vh * vh);
}

namespace detail {

/// Trace-based cosine of the rotation angle, clamped to [-1, 1].
template <class S>
S rotation_cosine(const Mat3<S>& r) {
  S c = (r(0, 0) + r(1, 1) + r(2, 2) - S(1)) * S(0.5);
  if (c > S(1)) c = S(1);
  if (c < S(-1)) c = S(-1);
  return c;
}

}  // namespace detail

/// True when log_so3 can produce the principal branch (angle < pi - 1e-9).
template <class S>
bool log_branch_ok(const Mat3<S>& r) {
  return value(detail::rotation_cosine(r)) > std::cos(M_PI - kBranchMargin);
}

/// Logarithm map SO(3) -> so(3), principal branch.
///
/// Three regimes keep both the value and its directional derivatives at
/// machine precision:
///   - angle < 1e-4: series for t/sin(t) in sin^2(t), polynomial in entries;
///   - moderate angles: t = atan2(|w|, cos t) with w = vee(R - R^T)/2;
///   - angle > 3: axis from the symmetric part, sign fixed by w, which avoids
///     the relative-error blowup of w near pi.
/// Angles within 1e-9 of pi throw BranchAmbiguousRotation.
template <class S>
Vec3<S> log_so3(const Mat3<S>& r) {
  using std::atan2;
  using std::sqrt;
  const S c = detail::rotation_cosine(r);
  if (!(value(c) > std::cos(M_PI - kBranchMargin)))
    throw BranchAmbiguousRotation("log_so3: rotation angle within 1e-9 of pi");

  const Vec3<S> w{(r(2, 1) - r(1, 2)) * S(0.5), (r(0, 2) - r(2, 0)) * S(0.5),
                  (r(1, 0) - r(0, 1)) * S(0.5)};  // = sin(t) * axis
  const S s2 = dot(w, w);                         // = sin^2(t)

  if (value(c) > std::cos(kSmallAngle)) {
    // t/sin(t) = 1 + t^2/6 + 7 t^4/360 + ..., with t^2 = s2 + s2^2/3 + ...
    const S coeff = S(1) + s2 * S(1.0 / 6.0) + s2 * s2 * S(3.0 / 40.0);
    return coeff * w;
  }

  const S s = sqrt(s2);
  const S t = atan2(s, c);

  if (value(c) > std::cos(kSymmetricAxisCut)) return (t / s) * w;

  // Near pi: R + R^T = 2 cos(t) I + 2 (1 - cos(t)) axis axis^T.
  const S q = S(1) / (S(1) - c);
  Vec3<S> d{(r(0, 0) - c) * q, (r(1, 1) - c) * q, (r(2, 2) - c) * q};  // axis_i^2
  int imax = 0;
  if (value(d.y) > value(d[imax])) imax = 1;
  if (value(d.z) > value(d[imax])) imax = 2;
  const S half = S(0.5) * q;
  Vec3<S> axis;
  if (imax == 0)
    axis = {d.x, (r(0, 1) + r(1, 0)) * half, (r(0, 2) + r(2, 0)) * half};
  else if (imax == 1)
    axis = {(r(0, 1) + r(1, 0)) * half, d.y, (r(1, 2) + r(2, 1)) * half};
  else
    axis = {(r(0, 2) + r(2, 0)) * half, (r(1, 2) + r(2, 1)) * half, d.z};
  axis = (S(1) / sqrt(d[imax])) * axis;
  if (value(dot(axis, w)) < 0) axis = -axis;
  return t * axis;
}

/// Adjoint action under the vector identification: Ad_R v = R v.
template <class A, class B>
auto adjoint(const Mat3<A>& r, const Vec3<B>& v) -> Vec3<promote_t<A, B>> {
  return r * v;
}

/// Coadjoint action under the dot-product pairing: Ad*_R p = R^T p.
template <class A, class B>
auto coadjoint(const Mat3<A>& r, const Vec3<B>& p) -> Vec3<promote_t<A, B>> {
  return {r(0, 0) * p.x + r(1, 0) * p.y + r(2, 0) * p.z,
          r(0, 1) * p.x + r(1, 1) * p.y + r(2, 1) * p.z,
          r(0, 2) * p.x + r(1, 2) * p.y + r(2, 2) * p.z};
}

/// Rigid-body inertia in the two equivalent forms used throughout: the
/// physical tensor I_b acting on angular-velocity vectors, and the symmetric
/// matrix J realizing the same operator on the algebra through the
/// anticommutator J(xi) = J xi + xi J. Constructed from I_b; J is derived as
/// J = tr(I_b)/2 * Id - I_b and both are required to be symmetric positive
/// definite.
class InertiaModel {
 public:
  /// Unit sphere, I_b = Id.
  InertiaModel();

  static InertiaModel from_body_inertia(const Mat3d& ib);
  static InertiaModel from_diagonal(double i1, double i2, double i3);

  const Mat3d& body_inertia() const { return ib_; }
  const Mat3d& anticommutator_matrix() const { return j_; }

  /// I_b v; identical to vee(J hat(v) + hat(v) J).
  template <class SV>
  Vec3<SV> apply(const Vec3<SV>& v) const {
    return ib_ * v;
  }

  /// I_b^{-1} p.
  template <class SV>
  Vec3<SV> solve(const Vec3<SV>& p) const {
    return ib_inv_ * p;
  }

 private:
  InertiaModel(const Mat3d& ib, const Mat3d& j, const Mat3d& ib_inv)
      : ib_(ib), j_(j), ib_inv_(ib_inv) {}

  Mat3d ib_;      // physical inertia tensor (kg m^2)
  Mat3d j_;       // anticommutator form, J = tr(I_b)/2 Id - I_b
  Mat3d ib_inv_;  // exact adjugate inverse of I_b
};

/// Orthogonality defect max|R^T R - I| plus determinant defect |det R - 1|.
double rotation_defect(const Mat3d& r);

/// Throws std::invalid_argument unless rotation_defect(r) <= tol.
void require_rotation(const Mat3d& r, double tol = 1e-12, const char* what = "rotation matrix");

}  // namespace lgvi
