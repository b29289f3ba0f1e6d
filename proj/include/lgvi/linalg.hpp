#pragma once

#include <cmath>
#include <type_traits>

namespace lgvi {

/// Fixed-size 3-vector over a generic scalar. The scalar must provide the
/// usual arithmetic; transcendental functions are pulled in by ADL so the
/// same code runs on double, Dual and CStep values.
template <class S>
struct Vec3 {
  S x{}, y{}, z{};

  Vec3() = default;
  Vec3(S x_, S y_, S z_) : x(x_), y(y_), z(z_) {}

  S operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  S& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator-() const { return {-x, -y, -z}; }
};

/// Row-major 3x3 matrix over a generic scalar.
template <class S>
struct Mat3 {
  S m[3][3]{};

  Mat3() = default;

  S operator()(int r, int c) const { return m[r][c]; }
  S& operator()(int r, int c) { return m[r][c]; }

  static Mat3 identity() {
    Mat3 I;
    I.m[0][0] = S(1);
    I.m[1][1] = S(1);
    I.m[2][2] = S(1);
    return I;
  }

  Mat3 transpose() const {
    Mat3 t;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t.m[r][c] = m[c][r];
    return t;
  }
};

using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;

template <class A, class B>
using promote_t = decltype(A{} * B{});

// ---- vector arithmetic ----

template <class A, class B>
auto operator+(const Vec3<A>& a, const Vec3<B>& b) -> Vec3<promote_t<A, B>> {
  return {a.x + b.x, a.y + b.y, a.z + b.z};
}

template <class A, class B>
auto operator-(const Vec3<A>& a, const Vec3<B>& b) -> Vec3<promote_t<A, B>> {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}

template <class A, class B>
auto operator*(const A& s, const Vec3<B>& v) -> Vec3<promote_t<A, B>> {
  return {s * v.x, s * v.y, s * v.z};
}

template <class A, class B>
auto operator*(const Vec3<A>& v, const B& s) -> Vec3<promote_t<A, B>> {
  return {v.x * s, v.y * s, v.z * s};
}

template <class A, class B>
auto dot(const Vec3<A>& a, const Vec3<B>& b) -> promote_t<A, B> {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class A, class B>
auto cross(const Vec3<A>& a, const Vec3<B>& b) -> Vec3<promote_t<A, B>> {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

// ---- matrix arithmetic ----

template <class A, class B>
auto operator+(const Mat3<A>& a, const Mat3<B>& b) -> Mat3<promote_t<A, B>> {
  Mat3<promote_t<A, B>> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
  return r;
}

template <class A, class B>
auto operator-(const Mat3<A>& a, const Mat3<B>& b) -> Mat3<promote_t<A, B>> {
  Mat3<promote_t<A, B>> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = a.m[i][j] - b.m[i][j];
  return r;
}

template <class A, class B>
auto operator*(const A& s, const Mat3<B>& a) -> Mat3<promote_t<A, B>> {
  Mat3<promote_t<A, B>> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.m[i][j] = s * a.m[i][j];
  return r;
}

template <class A, class B>
auto operator*(const Mat3<A>& a, const Mat3<B>& b) -> Mat3<promote_t<A, B>> {
  Mat3<promote_t<A, B>> r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r.m[i][j] = a.m[i][0] * b.m[0][j] + a.m[i][1] * b.m[1][j] + a.m[i][2] * b.m[2][j];
  return r;
}

template <class A, class B>
auto operator*(const Mat3<A>& a, const Vec3<B>& v) -> Vec3<promote_t<A, B>> {
  return {a.m[0][0] * v.x + a.m[0][1] * v.y + a.m[0][2] * v.z,
          a.m[1][0] * v.x + a.m[1][1] * v.y + a.m[1][2] * v.z,
          a.m[2][0] * v.x + a.m[2][1] * v.y + a.m[2][2] * v.z};
}

// ---- double-valued diagnostics ----

inline double inf_norm(const Vec3d& v) {
  return std::max({std::abs(v.x), std::abs(v.y), std::abs(v.z)});
}

inline double inf_norm(const Mat3d& a) {
  double n = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) n = std::max(n, std::abs(a.m[i][j]));
  return n;
}

inline double norm(const Vec3d& v) { return std::sqrt(dot(v, v)); }

/// Solve a 3x3 linear system by Gaussian elimination with partial pivoting.
/// Returns false if the matrix is numerically singular.
bool solve3(const Mat3d& a, const Vec3d& b, Vec3d& out);

}  // namespace lgvi
