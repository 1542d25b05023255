#pragma once

#include "slabsym/geometry.hpp"

#include <memory>
#include <utility>
#include <vector>

namespace slabsym {

/// Closest boundary point together with the unit normal pointing into the region.
struct BoundaryFoot {
  Vec2 point;
  Vec2 inward_normal;
};

/// A bounded planar region B used as the domain of a graph x_{n+1} = u(x).
class Region {
 public:
  virtual ~Region() = default;

  virtual bool contains(const Vec2& x) const = 0;
  virtual BoundaryFoot foot(const Vec2& x) const = 0;
  virtual std::pair<Vec2, Vec2> bounds() const = 0;

  /// Star center used for polar resampling; star_shaped() tells if it is valid.
  virtual Vec2 center() const = 0;
  virtual bool star_shaped() const { return true; }
  /// Distance from center() to the boundary along direction angle theta.
  virtual double radial_extent(double theta) const = 0;

  /// Counterclockwise closed polyline of the (outer) boundary, `n` vertices.
  virtual std::vector<Vec2> boundary_polyline(int n) const = 0;
};

class DiskRegion final : public Region {
 public:
  DiskRegion(Vec2 center, double radius);

  bool contains(const Vec2& x) const override;
  BoundaryFoot foot(const Vec2& x) const override;
  std::pair<Vec2, Vec2> bounds() const override;
  Vec2 center() const override { return center_; }
  double radial_extent(double) const override { return radius_; }
  std::vector<Vec2> boundary_polyline(int n) const override;

  double radius() const { return radius_; }

 private:
  Vec2 center_;
  double radius_;
};

class AnnulusRegion final : public Region {
 public:
  AnnulusRegion(Vec2 center, double inner_radius, double outer_radius);

  bool contains(const Vec2& x) const override;
  BoundaryFoot foot(const Vec2& x) const override;
  std::pair<Vec2, Vec2> bounds() const override;
  Vec2 center() const override { return center_; }
  bool star_shaped() const override { return false; }
  double radial_extent(double) const override { return outer_; }
  std::vector<Vec2> boundary_polyline(int n) const override;

 private:
  Vec2 center_;
  double inner_;
  double outer_;
};

/// Axis-aligned rectangle [lo, hi].
class BoxRegion final : public Region {
 public:
  BoxRegion(Vec2 lo, Vec2 hi);

  bool contains(const Vec2& x) const override;
  BoundaryFoot foot(const Vec2& x) const override;
  std::pair<Vec2, Vec2> bounds() const override { return {lo_, hi_}; }
  Vec2 center() const override { return 0.5 * (lo_ + hi_); }
  double radial_extent(double theta) const override;
  std::vector<Vec2> boundary_polyline(int n) const override;

 private:
  Vec2 lo_;
  Vec2 hi_;
};

/// Simple polygon, vertices counterclockwise. Normals are interpolated
/// between segments so that the foot normal varies continuously.
class PolygonRegion final : public Region {
 public:
  explicit PolygonRegion(std::vector<Vec2> vertices);
  PolygonRegion(std::vector<Vec2> vertices, Vec2 star_center);

  bool contains(const Vec2& x) const override;
  BoundaryFoot foot(const Vec2& x) const override;
  std::pair<Vec2, Vec2> bounds() const override;
  Vec2 center() const override { return center_; }
  double radial_extent(double theta) const override;
  std::vector<Vec2> boundary_polyline(int n) const override;

  const std::vector<Vec2>& vertices() const { return vertices_; }

 private:
  std::vector<Vec2> vertices_;
  std::vector<Vec2> vertex_normals_;
  Vec2 center_;
};

/// Signed area of a closed polyline (positive when counterclockwise).
double signed_area(const std::vector<Vec2>& poly);
Vec2 polygon_centroid(const std::vector<Vec2>& poly);

}  // namespace slabsym
