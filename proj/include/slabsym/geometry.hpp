#pragma once

#include <Eigen/Dense>

#include <utility>

namespace slabsym {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

/// Region between two parallel hyperplanes  {p : offset_lo <= p.axis <= offset_hi}.
/// Plate 1 sits at offset_lo, plate 2 at offset_hi.
struct Slab {
  Vec3 axis_normal = Vec3::UnitZ();
  double offset_lo = 0.0;
  double offset_hi = 1.0;
  int ambient_dim = 3;

  /// Throws InvalidInput if an invariant is broken.
  void validate() const;

  double height(const Vec3& p) const { return p.dot(axis_normal); }
  double thickness() const { return offset_hi - offset_lo; }
  double plate_offset(int plate) const;
  bool contains(const Vec3& p, double tol) const;

  /// Orthonormal (e1, e2) spanning the plates.
  std::pair<Vec3, Vec3> plate_frame() const;
};

struct Plane {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitX();

  void validate() const;
  double signed_distance(const Vec3& p) const { return (p - point).dot(normal); }
};

/// Mirror image of p across the plane.
inline Vec3 reflect(const Vec3& p, const Plane& plane) {
  return p - 2.0 * ((p - plane.point).dot(plane.normal)) * plane.normal;
}

/// Reflects a direction (no translation part).
inline Vec3 reflect_direction(const Vec3& v, const Plane& plane) {
  return v - 2.0 * v.dot(plane.normal) * plane.normal;
}

/// Any unit vector orthogonal to n.
Vec3 any_orthogonal(const Vec3& n);

}  // namespace slabsym
