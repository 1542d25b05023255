#pragma once

#include "slabsym/mesh.hpp"

#include <array>
#include <vector>

namespace slabsym {

/// Bucket-grid acceleration over a SurfaceMesh: closest points on M and
/// inside/outside tests for the body bounded by M and its plate caps.
/// Read-only after construction, so concurrent queries are safe.
class MeshIndex {
 public:
  explicit MeshIndex(const SurfaceMesh& mesh);

  struct Closest {
    double distance = 0.0;
    int face = -1;
    Vec3 point = Vec3::Zero();
    bool on_open_edge = false;  // foot on an edge or vertex of a boundary loop
  };

  /// Closest point of M (caps excluded).
  Closest closest(const Vec3& p) const;

  /// True when some point of M lies within `bound` of p.
  bool within(const Vec3& p, double bound) const;

  /// Parity of a ray along the slab axis against M plus the plate caps.
  bool inside(const Vec3& p) const;

  /// Distance to M, negative inside the body.
  double signed_distance(const Vec3& p) const;

  const SurfaceMesh& mesh() const { return mesh_; }

 private:
  struct Grid3 {
    Vec3 lo = Vec3::Zero();
    double cell = 1.0;
    std::array<int, 3> n{1, 1, 1};
    std::vector<std::vector<int>> cells;
  };
  struct Grid2 {
    Vec2 lo = Vec2::Zero();
    double cell = 1.0;
    std::array<int, 2> n{1, 1};
    std::vector<std::vector<int>> cells;
  };
  struct Flat {  // closed-surface triangle in plate coordinates
    std::array<Vec2, 3> xy;
    std::array<double, 3> z;
    std::array<int, 3> id;  // vertex ids (extra cap vertices offset by mesh size)
  };

  SurfaceMesh mesh_;
  std::vector<std::array<bool, 3>> open_edge_;  // per face, edge k = (v[k], v[k+1])
  std::vector<char> open_vertex_;
  Grid3 grid3_;
  Grid2 grid2_;
  std::vector<Flat> flats_;
  Vec3 e1_, e2_, axis_;
  double mid_height_ = 0.0;
  double plate_lo_ = 0.0, plate_hi_ = 0.0, plate_eps_ = 0.0;
};

/// Closest point on triangle abc to p; `region` is 0..2 for the vertices,
/// 3..5 for edges ab, bc, ca and 6 for the face interior.
Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c, int& region);

}  // namespace slabsym
