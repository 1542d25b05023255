#include "slabsym/body.hpp"
#include "slabsym/errors.hpp"
#include "slabsym/mesh_index.hpp"
#include "slabsym/moving_plane.hpp"
#include "slabsym/profile.hpp"

#include <gtest/gtest.h>

#include <Eigen/Geometry>

#include <cmath>
#include <numbers>
#include <random>

using namespace slabsym;

namespace {

Plane vertical_plane(const Vec3& point, const Vec3& normal) {
  Plane p;
  p.point = point;
  p.normal = normal.normalized();
  return p;
}

SweepResult synthetic_sweep(const Vec3& point, const Vec3& normal, double deviation = 0.0) {
  SweepResult r;
  r.direction = normal.normalized();
  r.symmetry_plane = vertical_plane(point, normal);
  r.t_star = point.dot(r.direction);
  r.deviation = deviation;
  return r;
}

double axis_distance(const SymmetryAxis& a, const Vec3& p) {
  const Vec3 d = p - a.point;
  return (d - d.dot(a.direction) * a.direction).norm();
}

}  // namespace

TEST(ReflectAndCompare, SphereAboutCenterPlane) {
  const Vec3 c(0.2, -0.3, 0.5);
  const auto m = sphere_mesh(c, 0.5, 64, 32);
  const double e = m.max_edge_length();
  const auto r = reflect_and_compare(m, vertical_plane(c, Vec3::UnitX()));
  EXPECT_FALSE(r.empty_cap);
  EXPECT_GT(r.compared, 0);
  EXPECT_LE(r.deviation, e * e);
  double prev = 0.0;
  for (double off : {0.1, 0.2}) {
    const auto s = reflect_and_compare(m, vertical_plane(c + off * Vec3::UnitX(), Vec3::UnitX()));
    EXPECT_GE(s.deviation, 0.05);
    // the reflected cap is a sphere of the same radius moved by 2 off
    EXPECT_LE(s.deviation, 2 * off + e * e);
    EXPECT_GT(s.deviation, prev);
    EXPECT_GE(s.witness, 0);
    prev = s.deviation;
  }
}

TEST(ReflectAndCompare, EmptyCapAndOrientation) {
  const auto m = sphere_mesh(Vec3(0, 0, 0.5), 0.4, 32, 16);
  EXPECT_TRUE(reflect_and_compare(m, vertical_plane(Vec3(-5, 0, 0), Vec3::UnitX())).empty_cap);
  EXPECT_THROW(reflect_and_compare(m, vertical_plane(Vec3::Zero(), Vec3(1, 0, 0.2))), OrientationError);
}

TEST(ReflectAndCompare, DoubleReflectionRestoresVertices) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> U(-1, 1);
  const auto m = ellipsoid_mesh(Vec3(0.1, 0.2, 0.6), Vec3(0.9, 0.5, 0.4), 32, 16);
  for (int trial = 0; trial < 20; ++trial) {
    const Plane p = vertical_plane(Vec3(U(rng), U(rng), U(rng)), Vec3(U(rng), U(rng), 0));
    for (const auto& v : m.vertices) {
      const Vec3 r = reflect(v, p);
      EXPECT_NEAR(r.z(), v.z(), 1e-15);
      EXPECT_LT((reflect(r, p) - v).norm(), 1e-12);
    }
  }
}

TEST(Sweep, EllipsoidAxesGiveCenterPlanes) {
  const Vec3 c(0.2, -0.1, 0.5);
  const auto m = ellipsoid_mesh(c, Vec3(1.0, 0.7, 0.45), 96, 48);
  const double e = m.max_edge_length();
  const MeshIndex index(m);
  for (const Vec3& d : {Vec3::UnitX(), Vec3::UnitY()}) {
    const auto r = sweep_direction(index, d);
    EXPECT_NEAR(r.t_star, c.dot(d), e);
    EXPECT_LE(r.deviation, 10 * e * e);
    EXPECT_LT((r.symmetry_plane.normal - d).norm(), 1e-12);
    EXPECT_GE(r.t_star, r.t_min);
    EXPECT_LE(r.t_star, r.t_max);
    EXPECT_EQ(r.touch_class, TouchClass::degenerate_simultaneous);
  }
}

TEST(Sweep, RevolvedProfilePlanesContainAxis) {
  Slab slab;
  SolverSettings s;
  s.profile_samples = 129;
  const auto p = solve_axisymmetric_profile(slab, PrescribedH::affine(0.6, 0.2), 1.3, 1.9, s);
  const Vec3 axis(0.3, -0.2, 0.0);
  const auto m = revolve_profile(p, slab, 64, axis);
  ASSERT_TRUE(check_mesh(m).ok()) << check_mesh(m).message;
  const MeshIndex index(m);
  const auto results = sweep_all(index, sweep_directions(slab, 8));
  ASSERT_EQ(results.size(), 8u);
  for (const auto& r : results) {
    EXPECT_LE(std::abs(r.symmetry_plane.signed_distance(axis)), 1e-6);
    EXPECT_LE(std::abs(r.symmetry_plane.signed_distance(axis + Vec3::UnitZ())), 1e-6);
  }
  const double e = m.max_edge_length();
  const auto rep = extract_symmetry_axis(results, slab, 10 * e * e);
  EXPECT_TRUE(rep.symmetric);
  ASSERT_TRUE(rep.axis.has_value());
  EXPECT_LE(axis_distance(*rep.axis, axis), 1e-6);
  EXPECT_LE(rep.axis_residual, 1e-6);
  EXPECT_EQ(rep.planes_used, 8);
}

TEST(Sweep, BumpStopsShortAndIsWitnessed) {
  const Vec3 c(0.15, 0.05, 0.5);
  const double R = 0.45;
  const auto sphere = sphere_mesh(c, R, 96, 48);
  const Vec3 at = sphere.vertices[nearest_vertex(sphere, c - R * Vec3::UnitX())];
  const auto m = perturb_mesh(sphere, at, 0.05, 0.15 * sphere.diameter());
  const MeshIndex index(m);
  const auto r = sweep_direction(index, Vec3::UnitX());
  EXPECT_LT(r.t_star, c.x() - 0.01);
  EXPECT_EQ(r.touch_class, TouchClass::interior);
  EXPECT_GE(reflect_and_compare(index, vertical_plane(c, Vec3::UnitX())).deviation, 0.02);
  const double e = m.max_edge_length();
  const auto results = sweep_all(index, sweep_directions(m.slab, 8));
  const auto rep = extract_symmetry_axis(results, m.slab, 10 * e * e);
  EXPECT_FALSE(rep.symmetric);
  ASSERT_GE(rep.witness_direction, 0);
  for (const auto& s : results) EXPECT_LE(s.deviation, results[rep.witness_direction].deviation);
  EXPECT_EQ(rep.max_deviation, results[rep.witness_direction].deviation);
}

TEST(Sweep, ShiftedPlateCircleTouchesAtBoundary) {
  Slab slab;
  const int rings = 33, segs = 96;
  const double rho = 0.5, shift = 0.2;
  const auto m = tube_mesh(
      rings, segs,
      [&](int r, int s) {
        const double z = double(r) / (rings - 1);
        const double t = 2 * std::numbers::pi * s / segs;
        return Vec3(shift * (1 - z) + rho * std::cos(t), rho * std::sin(t), z);
      },
      slab, true);
  ASSERT_TRUE(check_mesh(m).ok()) << check_mesh(m).message;
  const auto r = sweep_direction(MeshIndex(m), Vec3::UnitX());
  EXPECT_EQ(r.touch_class, TouchClass::boundary);
  ASSERT_FALSE(r.touch_points.empty());
  const double e = m.max_edge_length();
  const Vec3& tp = r.touch_points.front();
  EXPECT_TRUE(std::abs(tp.z()) <= e || std::abs(tp.z() - 1) <= e) << tp.transpose();
  EXPECT_LT(r.t_star, shift / 2);
}

TEST(SymmetryAxis, TwoOrthogonalPlanes) {
  Slab slab;
  const auto rep = extract_symmetry_axis(
      {synthetic_sweep(Vec3::Zero(), Vec3::UnitX()), synthetic_sweep(Vec3::Zero(), Vec3::UnitY())}, slab, 1e-6);
  ASSERT_TRUE(rep.axis.has_value());
  EXPECT_LT(rep.axis->point.head<2>().norm(), 1e-14);
  EXPECT_LT((rep.axis->direction - Vec3::UnitZ()).norm(), 1e-14);
  EXPECT_LT(rep.axis_residual, 1e-14);
}

TEST(SymmetryAxis, NoisyPlanesAndInconsistentInput) {
  Slab slab;
  std::mt19937 rng(59);
  std::normal_distribution<double> N(0.0, 1e-6);
  const Vec3 axis(0.3, -0.2, 0.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SweepResult> rs;
    for (const Vec3& d : sweep_directions(slab, 8)) {
      const Vec3 n = (d + Vec3(N(rng), N(rng), 0)).normalized();
      rs.push_back(synthetic_sweep(axis, n));
    }
    const auto rep = extract_symmetry_axis(rs, slab, 1e-6);
    ASSERT_TRUE(rep.axis.has_value());
    EXPECT_LE(axis_distance(*rep.axis, axis), 1e-5);
  }
  std::vector<SweepResult> bad;
  for (const Vec3& d : sweep_directions(slab, 8)) bad.push_back(synthetic_sweep(axis, d, 0.3));
  const auto rep = extract_symmetry_axis(bad, slab, 1e-3);
  EXPECT_FALSE(rep.axis.has_value());
  EXPECT_FALSE(rep.symmetric);
  // one usable plane is not enough
  bad.front().deviation = 0.0;
  EXPECT_FALSE(extract_symmetry_axis(bad, slab, 1e-3).axis.has_value());
}

TEST(SymmetryAxis, RigidMotionCovariance) {
  Slab slab;
  std::mt19937 rng(61);
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<SweepResult> rs;
  for (const Vec3& d : sweep_directions(slab, 6)) {
    const Vec3 n = (d + 1e-3 * Vec3(U(rng), U(rng), 0)).normalized();
    rs.push_back(synthetic_sweep(Vec3(0.1 + 1e-3 * U(rng), 0.4 + 1e-3 * U(rng), 0), n));
  }
  const auto base = extract_symmetry_axis(rs, slab, 1e-6);
  ASSERT_TRUE(base.axis.has_value());
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::AngleAxisd rot(std::numbers::pi * U(rng), Vec3::UnitZ());
    const Vec3 shift(U(rng), U(rng), 0);
    std::vector<SweepResult> moved;
    for (const auto& r : rs)
      moved.push_back(synthetic_sweep(rot * r.symmetry_plane.point + shift, rot * r.symmetry_plane.normal));
    const auto rep = extract_symmetry_axis(moved, slab, 1e-6);
    ASSERT_TRUE(rep.axis.has_value());
    EXPECT_LE(axis_distance(*rep.axis, rot * base.axis->point + shift), 1e-10);
    EXPECT_NEAR(rep.axis_residual, base.axis_residual, 1e-10);
  }
}

TEST(MeshIndex, InsideAndClosest) {
  const Vec3 c(0.0, 0.0, 0.5);
  const double R = 0.4;
  const auto m = sphere_mesh(c, R, 64, 32);
  const double e = m.max_edge_length();
  const MeshIndex index(m);
  EXPECT_TRUE(index.inside(c));
  EXPECT_FALSE(index.inside(c + Vec3(0.5, 0, 0)));
  std::mt19937 rng(67);
  std::uniform_real_distribution<double> U(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const Vec3 dir = Vec3(U(rng), U(rng), U(rng)).normalized();
    const double r = 0.6 * R + 0.8 * R * std::abs(U(rng));
    const Vec3 p = c + r * dir;
    if (std::abs(r - R) < e) continue;
    EXPECT_EQ(index.inside(p), r < R);
    const auto cl = index.closest(p);
    EXPECT_NEAR(cl.distance, std::abs(r - R), e * e);
    EXPECT_NEAR((cl.point - p).norm(), cl.distance, 1e-12);
    EXPECT_NEAR(index.signed_distance(p), r - R, e * e);
    EXPECT_TRUE(index.within(p, cl.distance + 1e-9));
    EXPECT_FALSE(index.within(p, 0.5 * cl.distance));
  }
}

TEST(MeshIndex, ClosestPointOnTriangleRegions) {
  const Vec3 a(0, 0, 0), b(1, 0, 0), c(0, 1, 0);
  int region = -1;
  EXPECT_EQ(closest_point_on_triangle(Vec3(-1, -1, 0.5), a, b, c, region), a);
  EXPECT_EQ(region, 0);
  EXPECT_EQ(closest_point_on_triangle(Vec3(0.5, -1, 0), a, b, c, region), Vec3(0.5, 0, 0));
  EXPECT_EQ(region, 3);
  EXPECT_LT((closest_point_on_triangle(Vec3(1, 1, 0), a, b, c, region) - Vec3(0.5, 0.5, 0)).norm(), 1e-15);
  EXPECT_EQ(region, 4);
  EXPECT_LT((closest_point_on_triangle(Vec3(0.2, 0.3, 2), a, b, c, region) - Vec3(0.2, 0.3, 0)).norm(), 1e-15);
  EXPECT_EQ(region, 6);
}
