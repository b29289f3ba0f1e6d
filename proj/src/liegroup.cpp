#include "lgvi/liegroup.hpp"

#include <cmath>
#include <stdexcept>

namespace lgvi {

bool solve3(const Mat3d& a, const Vec3d& b, Vec3d& out) {
  double m[3][4] = {{a(0, 0), a(0, 1), a(0, 2), b.x},
                    {a(1, 0), a(1, 1), a(1, 2), b.y},
                    {a(2, 0), a(2, 1), a(2, 2), b.z}};
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) return false;
    if (piv != col)
      for (int c = col; c < 4; ++c) std::swap(m[piv][c], m[col][c]);
    for (int r = col + 1; r < 3; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  for (int r = 2; r >= 0; --r) {
    double s = m[r][3];
    for (int c = r + 1; c < 3; ++c) s -= m[r][c] * out[c];
    if (m[r][r] == 0.0) return false;
    out[r] = s / m[r][r];
  }
  return true;
}

namespace {

Mat3d adjugate_inverse(const Mat3d& a, double det) {
  Mat3d inv;
  inv(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / det;
  inv(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / det;
  inv(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / det;
  inv(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / det;
  inv(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / det;
  inv(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / det;
  inv(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / det;
  inv(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / det;
  inv(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / det;
  return inv;
}

double det3(const Mat3d& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

// Sylvester criterion for a symmetric 3x3 matrix.
bool positive_definite(const Mat3d& a) {
  const double m1 = a(0, 0);
  const double m2 = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  return m1 > 0 && m2 > 0 && det3(a) > 0;
}

}  // namespace

InertiaModel::InertiaModel() { *this = from_diagonal(1.0, 1.0, 1.0); }

InertiaModel InertiaModel::from_body_inertia(const Mat3d& ib) {
  const double scale = std::max(inf_norm(ib), 1.0);
  const double sym_defect = std::max(
      {std::abs(ib(0, 1) - ib(1, 0)), std::abs(ib(0, 2) - ib(2, 0)), std::abs(ib(1, 2) - ib(2, 1))});
  if (sym_defect > 1e-9 * scale)
    throw std::invalid_argument("InertiaModel: inertia tensor is not symmetric");
  if (!positive_definite(ib))
    throw std::invalid_argument("InertiaModel: inertia tensor is not positive definite");

  const double half_tr = 0.5 * (ib(0, 0) + ib(1, 1) + ib(2, 2));
  Mat3d j = -1.0 * ib;
  for (int i = 0; i < 3; ++i) j(i, i) += half_tr;
  if (!positive_definite(j))
    throw std::invalid_argument(
        "InertiaModel: derived anticommutator matrix is not positive definite "
        "(inertia violates the triangle inequality)");

  return InertiaModel(ib, j, adjugate_inverse(ib, det3(ib)));
}

InertiaModel InertiaModel::from_diagonal(double i1, double i2, double i3) {
  Mat3d ib;
  ib(0, 0) = i1;
  ib(1, 1) = i2;
  ib(2, 2) = i3;
  return from_body_inertia(ib);
}

double rotation_defect(const Mat3d& r) {
  const Mat3d g = r.transpose() * r;
  double defect = inf_norm(g - Mat3d::identity());
  defect = std::max(defect, std::abs(det3(r) - 1.0));
  return defect;
}

void require_rotation(const Mat3d& r, double tol, const char* what) {
  if (!(rotation_defect(r) <= tol))
    throw std::invalid_argument(std::string(what) + ": not a rotation matrix (defect " +
                                std::to_string(rotation_defect(r)) + ")");
}

}  // namespace lgvi
