#pragma once

#include "slabsym/geometry.hpp"
#include "slabsym/region.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace slabsym {

/// The line alpha (in plate coordinates) about which a boundary is mirrored.
struct SymmetryLine {
  Vec2 point = Vec2::Zero();
  Vec2 direction = Vec2::UnitY();  // unit

  Vec2 normal() const { return Vec2(direction.y(), -direction.x()); }
  Vec2 reflect(const Vec2& p) const {
    const Vec2 n = normal();
    return p - 2.0 * (p - point).dot(n) * n;
  }
};

/// Closed polyline bounding the wetted region D_i on plate i, counterclockwise
/// in the plate frame returned by Slab::plate_frame().
struct BoundaryCurve {
  int plate_id = 1;
  std::vector<Vec2> vertices;
  std::optional<SymmetryLine> alpha;
  // data of the symmetric-graph constructor, when used
  double a_min = 0.0, a_max = 0.0;
  std::vector<double> f_samples;

  /// Throws InvalidInput: plate id, >= 3 vertices, simple, counterclockwise.
  void validate() const;
  double diameter() const;

  static BoundaryCurve circle(int plate, const Vec2& center, double radius, int n);
  static BoundaryCurve ellipse(int plate, const Vec2& center, double a, double b, int n);

  /// Boundary made of the graph of f >= 0 over a segment of alpha (uniform
  /// samples on [a_min, a_max], zero at both ends, positive inside) on one
  /// side and its mirror image on the other.
  static BoundaryCurve symmetric_graph(int plate, const SymmetryLine& alpha, double a_min, double a_max,
                                       const std::vector<double>& f);

  /// Region bounded by the curve; the star center is taken on alpha when present.
  std::shared_ptr<const Region> region() const;
};

/// Signed curvature of the planar curve at every vertex from the circle
/// through each vertex triple; positive where the curve turns toward its
/// inward normal (convex parts of a counterclockwise curve).
std::vector<double> boundary_mean_curvature(const BoundaryCurve& curve);

/// CSV vertex list ("x,y" per line, optional header) plus JSON metadata
/// {"plate_id":1, "alpha":{"point":[..],"direction":[..]}}.
BoundaryCurve read_boundary_curve(const std::string& csv_path, const std::string& json_path);
void write_boundary_curve(const BoundaryCurve& curve, const std::string& csv_path, const std::string& json_path);

}  // namespace slabsym
