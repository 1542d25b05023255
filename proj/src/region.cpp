#include "slabsym/region.hpp"

#include "slabsym/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace slabsym {

namespace {

Vec2 perp_left(const Vec2& v) { return Vec2(-v.y(), v.x()); }

std::vector<Vec2> circle_polyline(const Vec2& c, double r, int n) {
  std::vector<Vec2> out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double th = 2.0 * std::numbers::pi * k / n;
    out[k] = c + r * Vec2(std::cos(th), std::sin(th));
  }
  return out;
}

}  // namespace

DiskRegion::DiskRegion(Vec2 center, double radius) : center_(center), radius_(radius) {
  if (!(radius > 0.0)) throw InvalidInput("disk: radius must be positive");
}

// A relative slack of 1e-12 keeps lattice nodes that sit exactly on the circle
// classified the same way on both sides of a mirror line.
bool DiskRegion::contains(const Vec2& x) const {
  return (x - center_).squaredNorm() <= radius_ * radius_ * (1.0 + 1e-12);
}

BoundaryFoot DiskRegion::foot(const Vec2& x) const {
  Vec2 d = x - center_;
  const double r = d.norm();
  const Vec2 dir = r > 0.0 ? Vec2(d / r) : Vec2(1.0, 0.0);
  return {center_ + radius_ * dir, -dir};
}

std::pair<Vec2, Vec2> DiskRegion::bounds() const {
  return {center_ - Vec2::Constant(radius_), center_ + Vec2::Constant(radius_)};
}

std::vector<Vec2> DiskRegion::boundary_polyline(int n) const {
  return circle_polyline(center_, radius_, n);
}

AnnulusRegion::AnnulusRegion(Vec2 center, double inner_radius, double outer_radius)
    : center_(center), inner_(inner_radius), outer_(outer_radius) {
  if (!(inner_radius > 0.0 && inner_radius < outer_radius)) {
    throw InvalidInput("annulus: need 0 < inner_radius < outer_radius");
  }
}

bool AnnulusRegion::contains(const Vec2& x) const {
  const double r = (x - center_).norm();
  return r >= inner_ * (1.0 - 1e-12) && r <= outer_ * (1.0 + 1e-12);
}

BoundaryFoot AnnulusRegion::foot(const Vec2& x) const {
  Vec2 d = x - center_;
  const double r = d.norm();
  const Vec2 dir = r > 0.0 ? Vec2(d / r) : Vec2(1.0, 0.0);
  if (std::abs(r - inner_) < std::abs(outer_ - r)) return {center_ + inner_ * dir, dir};
  return {center_ + outer_ * dir, -dir};
}

std::pair<Vec2, Vec2> AnnulusRegion::bounds() const {
  return {center_ - Vec2::Constant(outer_), center_ + Vec2::Constant(outer_)};
}

std::vector<Vec2> AnnulusRegion::boundary_polyline(int n) const {
  return circle_polyline(center_, outer_, n);
}

BoxRegion::BoxRegion(Vec2 lo, Vec2 hi) : lo_(lo), hi_(hi) {
  if (!(lo.x() < hi.x() && lo.y() < hi.y())) throw InvalidInput("box: lo must be below hi");
}

bool BoxRegion::contains(const Vec2& x) const {
  return x.x() >= lo_.x() && x.x() <= hi_.x() && x.y() >= lo_.y() && x.y() <= hi_.y();
}

BoundaryFoot BoxRegion::foot(const Vec2& x) const {
  const double dl = x.x() - lo_.x(), dr = hi_.x() - x.x();
  const double db = x.y() - lo_.y(), dt = hi_.y() - x.y();
  const double m = std::min({dl, dr, db, dt});
  if (m == dl) return {Vec2(lo_.x(), x.y()), Vec2(1, 0)};
  if (m == dr) return {Vec2(hi_.x(), x.y()), Vec2(-1, 0)};
  if (m == db) return {Vec2(x.x(), lo_.y()), Vec2(0, 1)};
  return {Vec2(x.x(), hi_.y()), Vec2(0, -1)};
}

double BoxRegion::radial_extent(double theta) const {
  const Vec2 c = center();
  const Vec2 d(std::cos(theta), std::sin(theta));
  double t = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 2; ++a) {
    if (std::abs(d[a]) > 1e-15) {
      const double bound = d[a] > 0 ? hi_[a] : lo_[a];
      t = std::min(t, (bound - c[a]) / d[a]);
    }
  }
  return t;
}

std::vector<Vec2> BoxRegion::boundary_polyline(int n) const {
  std::vector<Vec2> out;
  const Vec2 corners[4] = {lo_, Vec2(hi_.x(), lo_.y()), hi_, Vec2(lo_.x(), hi_.y())};
  const int per_side = std::max(1, n / 4);
  for (int s = 0; s < 4; ++s) {
    const Vec2& a = corners[s];
    const Vec2& b = corners[(s + 1) % 4];
    for (int k = 0; k < per_side; ++k) out.push_back(a + (b - a) * (double(k) / per_side));
  }
  return out;
}

double signed_area(const std::vector<Vec2>& poly) {
  double a = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Vec2& p = poly[k];
    const Vec2& q = poly[(k + 1) % poly.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& poly) {
  const double a = signed_area(poly);
  Vec2 c = Vec2::Zero();
  for (std::size_t k = 0; k < poly.size(); ++k) {
    const Vec2& p = poly[k];
    const Vec2& q = poly[(k + 1) % poly.size()];
    const double cr = p.x() * q.y() - q.x() * p.y();
    c += (p + q) * cr;
  }
  return c / (6.0 * a);
}

PolygonRegion::PolygonRegion(std::vector<Vec2> vertices)
    : PolygonRegion(vertices, polygon_centroid(vertices)) {}

PolygonRegion::PolygonRegion(std::vector<Vec2> vertices, Vec2 star_center)
    : vertices_(std::move(vertices)), center_(star_center) {
  if (vertices_.size() < 3) throw InvalidInput("polygon: need at least 3 vertices");
  if (signed_area(vertices_) <= 0.0) throw InvalidInput("polygon: vertices must be counterclockwise");
  const std::size_t n = vertices_.size();
  vertex_normals_.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2& prev = vertices_[(k + n - 1) % n];
    const Vec2& cur = vertices_[k];
    const Vec2& next = vertices_[(k + 1) % n];
    const Vec2 n0 = perp_left(cur - prev).normalized();
    const Vec2 n1 = perp_left(next - cur).normalized();
    vertex_normals_[k] = (n0 + n1).normalized();
  }
}

bool PolygonRegion::contains(const Vec2& x) const {
  bool inside = false;
  const std::size_t n = vertices_.size();
  for (std::size_t k = 0, j = n - 1; k < n; j = k++) {
    const Vec2& a = vertices_[k];
    const Vec2& b = vertices_[j];
    if ((a.y() > x.y()) != (b.y() > x.y())) {
      const double xc = (b.x() - a.x()) * (x.y() - a.y()) / (b.y() - a.y()) + a.x();
      if (x.x() < xc) inside = !inside;
    }
  }
  return inside;
}

BoundaryFoot PolygonRegion::foot(const Vec2& x) const {
  const std::size_t n = vertices_.size();
  double best = std::numeric_limits<double>::infinity();
  BoundaryFoot out{vertices_[0], vertex_normals_[0]};
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2& a = vertices_[k];
    const Vec2& b = vertices_[(k + 1) % n];
    const Vec2 ab = b - a;
    const double s = std::clamp((x - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    const Vec2 q = a + s * ab;
    const double d = (x - q).squaredNorm();
    if (d < best) {
      best = d;
      const Vec2 nrm = ((1.0 - s) * vertex_normals_[k] + s * vertex_normals_[(k + 1) % n]).normalized();
      out = {q, nrm};
    }
  }
  return out;
}

std::pair<Vec2, Vec2> PolygonRegion::bounds() const {
  Vec2 lo = vertices_[0], hi = vertices_[0];
  for (const auto& v : vertices_) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

double PolygonRegion::radial_extent(double theta) const {
  const Vec2 d(std::cos(theta), std::sin(theta));
  const std::size_t n = vertices_.size();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2 a = vertices_[k] - center_;
    const Vec2 b = vertices_[(k + 1) % n] - center_;
    const Vec2 e = b - a;
    const double den = d.x() * e.y() - d.y() * e.x();
    if (std::abs(den) < 1e-300) continue;
    // center + t d = a + s e
    const double t = (a.x() * e.y() - a.y() * e.x()) / den;
    const double s = (a.x() * d.y() - a.y() * d.x()) / den;
    if (t > 0.0 && s >= -1e-12 && s <= 1.0 + 1e-12) best = std::min(best, t);
  }
  if (!std::isfinite(best)) throw InvalidInput("polygon: center is not inside the region");
  return best;
}

std::vector<Vec2> PolygonRegion::boundary_polyline(int) const { return vertices_; }

}  // namespace slabsym
