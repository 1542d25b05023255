#include "slabsym/geometry.hpp"

#include "slabsym/errors.hpp"

#include <cmath>

namespace slabsym {

void Slab::validate() const {
  if (!(offset_lo < offset_hi)) {
    throw InvalidInput("slab: offset_lo must be below offset_hi");
  }
  if (std::abs(axis_normal.norm() - 1.0) > 1e-12) {
    throw InvalidInput("slab: axis_normal must have unit length");
  }
  if (ambient_dim != 3) {
    // Surface meshes live in R^3; curves (n = 1) are only supported by the
    // pointwise algebra.
    throw InvalidInput("slab: only ambient_dim = 3 is supported by mesh geometry");
  }
}

double Slab::plate_offset(int plate) const {
  if (plate == 1) return offset_lo;
  if (plate == 2) return offset_hi;
  throw InvalidInput("slab: plate id must be 1 or 2");
}

bool Slab::contains(const Vec3& p, double tol) const {
  const double z = height(p);
  return z >= offset_lo - tol && z <= offset_hi + tol;
}

std::pair<Vec3, Vec3> Slab::plate_frame() const {
  const Vec3 e1 = any_orthogonal(axis_normal);
  const Vec3 e2 = axis_normal.cross(e1).normalized();
  return {e1, e2};
}

void Plane::validate() const {
  if (std::abs(normal.norm() - 1.0) > 1e-12) {
    throw InvalidInput("plane: normal must have unit length");
  }
}

Vec3 any_orthogonal(const Vec3& n) {
  // Prefer e1 so that the default frame of a z-axis slab is (x, y).
  Vec3 trial = Vec3::UnitX();
  if (std::abs(n.dot(trial)) > 0.9) trial = Vec3::UnitY();
  return (trial - trial.dot(n) * n).normalized();
}

}  // namespace slabsym
