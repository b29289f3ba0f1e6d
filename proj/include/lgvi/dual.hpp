#pragma once

#include <cmath>

namespace lgvi {

/// Forward-mode dual number: carries a value and one directional derivative.
/// Arithmetic propagates the derivative exactly (to rounding), which gives
/// machine-precision Jacobian columns without subtractive cancellation.
struct Dual {
  double v{0};  ///< value
  double d{0};  ///< derivative along the seeded direction

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit by design
  Dual(double value, double deriv) : v(value), d(deriv) {}

  Dual operator-() const { return {-v, -d}; }

  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    d = (d * o.v - v * o.d) / (o.v * o.v);
    v /= o.v;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }

inline bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
inline bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
inline bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
inline bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }
inline bool operator==(const Dual& a, const Dual& b) { return a.v == b.v; }
inline bool operator!=(const Dual& a, const Dual& b) { return a.v != b.v; }

inline Dual sqrt(const Dual& a) {
  const double r = std::sqrt(a.v);
  return {r, a.d / (2.0 * r)};
}

inline Dual sin(const Dual& a) { return {std::sin(a.v), std::cos(a.v) * a.d}; }

inline Dual cos(const Dual& a) { return {std::cos(a.v), -std::sin(a.v) * a.d}; }

inline Dual atan2(const Dual& y, const Dual& x) {
  const double q = x.v * x.v + y.v * y.v;
  return {std::atan2(y.v, x.v), (x.v * y.d - y.v * x.d) / q};
}

inline Dual abs(const Dual& a) { return a.v < 0 ? -a : a; }

inline bool isfinite(const Dual& a) { return std::isfinite(a.v) && std::isfinite(a.d); }

/// Value-part extraction, overloaded so generic code can branch on it.
inline double value(const Dual& a) { return a.v; }
inline double value(double a) { return a; }

}  // namespace lgvi
