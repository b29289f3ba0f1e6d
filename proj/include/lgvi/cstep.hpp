#pragma once

#include <cmath>
#include <complex>

namespace lgvi {

/// Complex-step scalar: a thin wrapper over std::complex<double> whose
/// comparisons act on the real part. Evaluating a real-valued residual at
/// x + i*eps*e_k and dividing the imaginary part by eps yields the k-th
/// Jacobian column without round-off from differencing.
///
/// The wrapper exists so that branch selection (small-angle thresholds,
/// clamps) follows the unperturbed real path, and so that no conjugation
/// sneaks into inner products: all formulas here are real formulas evaluated
/// at a complex point.
struct CStep {
  std::complex<double> z{};

  CStep() = default;
  CStep(double re) : z(re) {}  // NOLINT: implicit by design
  CStep(double re, double im) : z(re, im) {}
  explicit CStep(std::complex<double> c) : z(c) {}

  double real() const { return z.real(); }
  double imag() const { return z.imag(); }

  CStep operator-() const { return CStep(-z); }

  CStep& operator+=(const CStep& o) {
    z += o.z;
    return *this;
  }
  CStep& operator-=(const CStep& o) {
    z -= o.z;
    return *this;
  }
  CStep& operator*=(const CStep& o) {
    z *= o.z;
    return *this;
  }
  CStep& operator/=(const CStep& o) {
    z /= o.z;
    return *this;
  }
};

inline CStep operator+(CStep a, const CStep& b) { return a += b; }
inline CStep operator-(CStep a, const CStep& b) { return a -= b; }
inline CStep operator*(CStep a, const CStep& b) { return a *= b; }
inline CStep operator/(CStep a, const CStep& b) { return a /= b; }

inline bool operator<(const CStep& a, const CStep& b) { return a.real() < b.real(); }
inline bool operator>(const CStep& a, const CStep& b) { return a.real() > b.real(); }
inline bool operator<=(const CStep& a, const CStep& b) { return a.real() <= b.real(); }
inline bool operator>=(const CStep& a, const CStep& b) { return a.real() >= b.real(); }
inline bool operator==(const CStep& a, const CStep& b) { return a.real() == b.real(); }
inline bool operator!=(const CStep& a, const CStep& b) { return a.real() != b.real(); }

inline CStep sqrt(const CStep& a) { return CStep(std::sqrt(a.z)); }
inline CStep sin(const CStep& a) { return CStep(std::sin(a.z)); }
inline CStep cos(const CStep& a) { return CStep(std::cos(a.z)); }

/// Holomorphic atan2 via the half-angle form 2*atan(y / (sqrt(x^2+y^2) + x)).
/// Valid for angles in (-pi, pi), which covers every rotation-log use here
/// (the branch cut at pi is rejected upstream).
inline CStep atan2(const CStep& y, const CStep& x) {
  const std::complex<double> r = std::sqrt(x.z * x.z + y.z * y.z);
  return CStep(2.0 * std::atan(y.z / (r + x.z)));
}

inline CStep abs(const CStep& a) { return a.real() < 0 ? -a : a; }

inline bool isfinite(const CStep& a) {
  return std::isfinite(a.real()) && std::isfinite(a.imag());
}

inline double value(const CStep& a) { return a.real(); }

}  // namespace lgvi
