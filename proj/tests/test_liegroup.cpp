#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lgvi/liegroup.hpp"
#include "oracles.hpp"

using lgvi::Dual;
using lgvi::Mat3d;
using lgvi::Vec3d;

namespace {
constexpr double kPi = M_PI;
}

TEST_CASE("hat: zero vector maps to the zero matrix") {
  const Mat3d a = lgvi::hat(Vec3d{0, 0, 0});
  CHECK(lgvi::inf_norm(a) == 0.0);
}

TEST_CASE("hat: e1 matches the displayed matrix") {
  const Mat3d a = lgvi::hat(Vec3d{1, 0, 0});
  const double expected[3][3] = {{0, 0, 0}, {0, 0, -1}, {0, 1, 0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(a(i, j) == expected[i][j]);
}

TEST_CASE("hat realizes the cross product") {
  const Vec3d v{1, 2, 3};
  const Vec3d w{4, 5, 6};
  const Vec3d hv = lgvi::hat(v) * w;
  CHECK(hv.x == -3.0);
  CHECK(hv.y == 6.0);
  CHECK(hv.z == -3.0);

  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    const Vec3d a = oracles::random_vec(rng, -2, 2);
    const Vec3d b = oracles::random_vec(rng, -2, 2);
    CHECK(lgvi::inf_norm(lgvi::hat(a) * b - cross(a, b)) <= 1e-15);
  }
}

TEST_CASE("vee: inverse of hat, commutator identity, skew rejection") {
  CHECK(lgvi::inf_norm(lgvi::vee(Mat3d{})) == 0.0);

  const Vec3d v{1, 2, 3};
  CHECK(lgvi::inf_norm(lgvi::vee(lgvi::hat(v)) - v) == 0.0);

  // [hat(u), hat(v)] = hat(u x v) for u = e1, v = e2
  const Mat3d hu = lgvi::hat(Vec3d{1, 0, 0});
  const Mat3d hv = lgvi::hat(Vec3d{0, 1, 0});
  const Vec3d bracket = lgvi::vee(hu * hv - hv * hu);
  CHECK(bracket.x == 0.0);
  CHECK(bracket.y == 0.0);
  CHECK(bracket.z == 1.0);

  Mat3d bad = lgvi::hat(v);
  bad(0, 1) += 1e-6;
  CHECK_THROWS_AS(lgvi::vee(bad), std::invalid_argument);

  Mat3d ok = lgvi::hat(v);
  ok(0, 1) += 1e-12;  // below the 1e-9 rejection threshold
  CHECK_NOTHROW(lgvi::vee(ok));
}

TEST_CASE("hat is a Lie algebra isomorphism") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const Vec3d u = oracles::random_vec(rng, -3, 3);
    const Vec3d v = oracles::random_vec(rng, -3, 3);
    const Mat3d hu = lgvi::hat(u), hv = lgvi::hat(v);
    CHECK(lgvi::inf_norm(lgvi::vee(hu * hv - hv * hu) - cross(u, v)) <= 1e-13);
  }
}

TEST_CASE("exp_so3: zero, quarter turn, series oracle") {
  CHECK(lgvi::inf_norm(lgvi::exp_so3(Vec3d{0, 0, 0}) - Mat3d::identity()) == 0.0);

  const Mat3d quarter = lgvi::exp_so3(Vec3d{0, 0, kPi / 2});
  const double expected[3][3] = {{0, -1, 0}, {1, 0, 0}, {0, 0, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(quarter(i, j) == doctest::Approx(expected[i][j]).epsilon(1e-15));

  const Vec3d v{0.1, 0.2, 0.3};
  CHECK(lgvi::inf_norm(lgvi::exp_so3(v) - oracles::series_exp(v)) <= 1e-14);
}

TEST_CASE("exp_so3: rotation invariants and branch continuity") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Vec3d v = oracles::random_vec(rng, -1.8, 1.8);
    CHECK(lgvi::rotation_defect(lgvi::exp_so3(v)) <= 1e-13);
  }
  // both sides of the small-angle branch against the series oracle
  for (const double theta : {0.9e-4, 0.9999e-4, 1.0001e-4, 1.1e-4, 1e-7, 1e-12}) {
    const Vec3d v{theta * 0.6, theta * 0.8, 0};
    CHECK(lgvi::inf_norm(lgvi::exp_so3(v) - oracles::series_exp(v)) <= 1e-15);
  }
}

TEST_CASE("group closure: products of exponentials stay rotations") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 100; ++i) {
    const Mat3d r = lgvi::exp_so3(oracles::random_vec(rng, -1.5, 1.5)) *
                    lgvi::exp_so3(oracles::random_vec(rng, -1.5, 1.5));
    CHECK(lgvi::rotation_defect(r) <= 1e-12);
  }
}

TEST_CASE("log_so3: identity, quarter turn, round trips") {
  CHECK(lgvi::inf_norm(lgvi::log_so3(Mat3d::identity())) == 0.0);

  Mat3d quarter{};
  quarter(0, 1) = -1;
  quarter(1, 0) = 1;
  quarter(2, 2) = 1;
  const Vec3d lq = lgvi::log_so3(quarter);
  CHECK(lq.x == 0.0);
  CHECK(lq.y == 0.0);
  CHECK(lq.z == doctest::Approx(kPi / 2).epsilon(1e-15));

  const Vec3d v{0.7, -0.2, 0.4};
  CHECK(lgvi::inf_norm(lgvi::log_so3(lgvi::exp_so3(v)) - v) <= 1e-12);
}

TEST_CASE("log_so3: round trip over the full principal branch") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(0.0, kPi - 0.01);
  for (int i = 0; i < 300; ++i) {
    Vec3d axis;
    double n2;
    do {
      axis = oracles::random_vec(rng, -1, 1);
      n2 = dot(axis, axis);
    } while (n2 < 1e-4);
    const Vec3d v = (angle(rng) / std::sqrt(n2)) * axis;
    CHECK(lgvi::inf_norm(lgvi::log_so3(lgvi::exp_so3(v)) - v) <= 1e-10);
  }
  // angles straddling the series threshold and the symmetric-part branch
  for (const double theta : {1e-9, 1e-5, 0.9999e-4, 1.0001e-4, 2.9, 3.05, kPi - 0.005, kPi - 1e-7}) {
    const Vec3d v{theta / 3.0, theta * 2.0 / 3.0, -theta * 2.0 / 3.0};  // |v| = theta
    CHECK(lgvi::inf_norm(lgvi::log_so3(lgvi::exp_so3(v)) - v) <= 1e-10);
  }
}

TEST_CASE("log_so3: branch ambiguity near pi is an error") {
  CHECK_THROWS_AS(lgvi::log_so3(lgvi::exp_so3(Vec3d{kPi, 0, 0})), lgvi::BranchAmbiguousRotation);
  CHECK_THROWS_AS(lgvi::log_so3(lgvi::exp_so3(Vec3d{0, kPi - 1e-10, 0})),
                  lgvi::BranchAmbiguousRotation);
  CHECK(!lgvi::log_branch_ok(lgvi::exp_so3(Vec3d{kPi, 0, 0})));
  CHECK(lgvi::log_branch_ok(lgvi::exp_so3(Vec3d{0.5, 0, 0})));
}

TEST_CASE("adjoint: identity, quarter turn, conjugation identity") {
  const Vec3d v{0.3, -0.7, 1.1};
  CHECK(lgvi::inf_norm(lgvi::adjoint(Mat3d::identity(), v) - v) == 0.0);

  const Mat3d quarter = lgvi::exp_so3(Vec3d{0, 0, kPi / 2});
  const Vec3d rotated = lgvi::adjoint(quarter, Vec3d{1, 0, 0});
  CHECK(rotated.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(rotated.y == doctest::Approx(1.0).epsilon(1e-15));

  std::mt19937_64 rng(6);
  for (int i = 0; i < 100; ++i) {
    const Mat3d r = oracles::random_rotation(rng);
    const Vec3d u = oracles::random_vec(rng, -2, 2);
    // hat(Ad_R u) = R hat(u) R^T
    CHECK(lgvi::inf_norm(lgvi::hat(lgvi::adjoint(r, u)) - r * lgvi::hat(u) * r.transpose()) <=
          1e-13);
  }
}

TEST_CASE("coadjoint: identity, transpose action, duality pairing") {
  const Vec3d p{0.4, 0.5, -0.6};
  CHECK(lgvi::inf_norm(lgvi::coadjoint(Mat3d::identity(), p) - p) == 0.0);

  const Mat3d quarter = lgvi::exp_so3(Vec3d{0, 0, kPi / 2});
  const Vec3d q = lgvi::coadjoint(quarter, Vec3d{0, 1, 0});
  CHECK(q.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(q.y == doctest::Approx(0.0).epsilon(1e-15));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Mat3d r = oracles::random_rotation(rng);
    const Vec3d pp = oracles::random_vec(rng, -2, 2);
    const Vec3d vv = oracles::random_vec(rng, -2, 2);
    CHECK(dot(lgvi::coadjoint(r, pp), vv) ==
          doctest::Approx(dot(pp, lgvi::adjoint(r, vv))).epsilon(1e-13));
  }
}

TEST_CASE("inertia: diagonal example and the anticommutator identity") {
  const lgvi::InertiaModel m = lgvi::InertiaModel::from_diagonal(5, 4, 3);

  // J = tr(I_b)/2 Id - I_b = diag(1, 2, 3)
  const Mat3d j = m.anticommutator_matrix();
  CHECK(j(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(j(1, 1) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(j(2, 2) == doctest::Approx(3.0).epsilon(1e-15));

  const Vec3d ones{1, 1, 1};
  const Vec3d applied = m.apply(ones);
  CHECK(applied.x == 5.0);
  CHECK(applied.y == 4.0);
  CHECK(applied.z == 3.0);
  // same value through the matrix route vee(J hat(v) + hat(v) J)
  const Mat3d hv = lgvi::hat(ones);
  CHECK(lgvi::inf_norm(lgvi::vee(j * hv + hv * j) - applied) <= 1e-14);

  CHECK(lgvi::inf_norm(m.apply(Vec3d{0, 0, 0})) == 0.0);
}

TEST_CASE("inertia: self-adjointness and matrix-route agreement on random data") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 100; ++i) {
    const lgvi::InertiaModel m = oracles::random_inertia(rng);
    const Vec3d u = oracles::random_vec(rng, -2, 2);
    const Vec3d w = oracles::random_vec(rng, -2, 2);
    CHECK(dot(m.apply(u), w) == doctest::Approx(dot(m.apply(w), u)).epsilon(1e-13));

    const Mat3d j = m.anticommutator_matrix();
    const Mat3d hu = lgvi::hat(u);
    CHECK(lgvi::inf_norm(lgvi::vee(j * hu + hu * j) - m.apply(u)) <= 1e-13);
  }
}

TEST_CASE("inertia_solve: diagonal case, zero, random round trips") {
  const lgvi::InertiaModel m = lgvi::InertiaModel::from_diagonal(5, 4, 3);
  const Vec3d x = m.solve(Vec3d{5, 4, 3});
  CHECK(x.x == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x.y == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(x.z == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(lgvi::inf_norm(m.solve(Vec3d{0, 0, 0})) == 0.0);

  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const lgvi::InertiaModel mm = oracles::random_inertia(rng);
    const Vec3d p = oracles::random_vec(rng, -3, 3);
    CHECK(lgvi::inf_norm(mm.apply(mm.solve(p)) - p) <= 1e-12);
  }
}

TEST_CASE("inertia conversion is an involution") {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 50; ++i) {
    const lgvi::InertiaModel m = oracles::random_inertia(rng);
    const Mat3d j = m.anticommutator_matrix();
    const double trace = j(0, 0) + j(1, 1) + j(2, 2);
    Mat3d back = -1.0 * j;
    for (int d = 0; d < 3; ++d) back(d, d) += trace;
    CHECK(lgvi::inf_norm(back - m.body_inertia()) <= 1e-14);
  }
}

TEST_CASE("inertia: invalid tensors are rejected") {
  Mat3d asym{};
  asym(0, 0) = 5;
  asym(1, 1) = 4;
  asym(2, 2) = 3;
  asym(0, 1) = 0.1;  // not mirrored
  CHECK_THROWS_AS(lgvi::InertiaModel::from_body_inertia(asym), std::invalid_argument);

  CHECK_THROWS_AS(lgvi::InertiaModel::from_diagonal(1, 1, -1), std::invalid_argument);
  // triangle inequality: 1 + 1 < 3, so J is indefinite
  CHECK_THROWS_AS(lgvi::InertiaModel::from_diagonal(1, 1, 3), std::invalid_argument);
}

TEST_CASE("generic scalars follow the double path") {
  const Vec3d v{0.2, -0.4, 0.6};
  const lgvi::Vec3<Dual> vd{Dual(v.x, 1.0), Dual(v.y), Dual(v.z)};
  const lgvi::Mat3<Dual> rd = lgvi::exp_so3(vd);
  const Mat3d r = lgvi::exp_so3(v);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(rd(i, j).v == r(i, j));

  const lgvi::Vec3<Dual> back = lgvi::log_so3(rd);
  CHECK(back.x.v == doctest::Approx(v.x).epsilon(1e-13));

  const lgvi::Vec3<lgvi::CStep> vc{lgvi::CStep(v.x, 1e-20), lgvi::CStep(v.y), lgvi::CStep(v.z)};
  const lgvi::Mat3<lgvi::CStep> rc = lgvi::exp_so3(vc);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(rc(i, j).real() == r(i, j));
}
