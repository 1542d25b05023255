#include "slabsym/mesh_index.hpp"

#include "slabsym/errors.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace slabsym {

Vec3 closest_point_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c, int& region) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) {
    region = 0;
    return a;
  }
  const Vec3 bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) {
    region = 1;
    return b;
  }
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) {
    region = 3;
    return a + (d1 / (d1 - d3)) * ab;
  }
  const Vec3 cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) {
    region = 2;
    return c;
  }
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) {
    region = 5;
    return a + (d2 / (d2 - d6)) * ac;
  }
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    region = 4;
    return b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b);
  }
  region = 6;
  const double denom = 1.0 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

namespace {

// Sign of the orientation of p + (eps, eps^2) relative to the directed edge a->b,
// evaluated with a canonical edge order so that neighbouring triangles agree.
int orient(const Vec2& a, const Vec2& b, const Vec2& p) {
  const bool swap = (b.x() < a.x()) || (b.x() == a.x() && b.y() < a.y());
  const Vec2& u = swap ? b : a;
  const Vec2& v = swap ? a : b;
  const Vec2 e = v - u;
  const double l = (v.x() - u.x()) * (p.y() - u.y());
  const double r = (v.y() - u.y()) * (p.x() - u.x());
  const double det = l - r;
  int s = 0;
  if (std::abs(det) > 1e-14 * (std::abs(l) + std::abs(r))) {
    s = det > 0 ? 1 : -1;
  } else {
    using Exact = boost::multiprecision::cpp_bin_float_100;
    const Exact ex = Exact(v.x()) - Exact(u.x()), ey = Exact(v.y()) - Exact(u.y());
    const Exact d = ex * (Exact(p.y()) - Exact(u.y())) - ey * (Exact(p.x()) - Exact(u.x()));
    s = d > 0 ? 1 : (d < 0 ? -1 : 0);
  }
  if (s == 0 && e.y() != 0.0)
    s = e.y() < 0 ? 1 : -1;
  else if (s == 0)
    s = e.x() > 0 ? 1 : -1;
  return swap ? -s : s;
}

}  // namespace

MeshIndex::MeshIndex(const SurfaceMesh& mesh) : mesh_(mesh) {
  if (mesh.faces.empty()) throw InvalidInput("mesh index: empty mesh");
  axis_ = mesh.slab.axis_normal.normalized();
  mid_height_ = 0.5 * (mesh.slab.offset_lo + mesh.slab.offset_hi);
  plate_lo_ = mesh.slab.offset_lo;
  plate_hi_ = mesh.slab.offset_hi;
  plate_eps_ = 1e-9 * std::max(1.0, plate_hi_ - plate_lo_);
  std::tie(e1_, e2_) = mesh.slab.plate_frame();

  // open (boundary-loop) edges and vertices
  std::map<std::pair<int, int>, int> count;
  for (const auto& f : mesh.faces)
    for (int k = 0; k < 3; ++k) {
      int a = f[k], b = f[(k + 1) % 3];
      ++count[{std::min(a, b), std::max(a, b)}];
    }
  open_edge_.resize(mesh.faces.size());
  open_vertex_.assign(mesh.vertices.size(), 0);
  for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi)
    for (int k = 0; k < 3; ++k) {
      int a = mesh.faces[fi][k], b = mesh.faces[fi][(k + 1) % 3];
      const bool open = count[{std::min(a, b), std::max(a, b)}] == 1;
      open_edge_[fi][k] = open;
      if (open) open_vertex_[a] = open_vertex_[b] = 1;
    }

  // 3D buckets over M
  Vec3 lo = mesh.vertices[0], hi = lo;
  for (const auto& v : mesh.vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  const Vec3 ext = (hi - lo).cwiseMax(Vec3::Constant(1e-12));
  double cell = std::max(mesh.mean_edge_length(), ext.maxCoeff() / 160.0);
  grid3_.lo = lo;
  grid3_.cell = cell;
  for (int a = 0; a < 3; ++a) grid3_.n[a] = std::max(1, static_cast<int>(std::ceil(ext[a] / cell)));
  grid3_.cells.assign(static_cast<std::size_t>(grid3_.n[0]) * grid3_.n[1] * grid3_.n[2], {});
  auto clamp3 = [&](double x, int a) {
    return std::clamp(static_cast<int>(std::floor((x - grid3_.lo[a]) / grid3_.cell)), 0, grid3_.n[a] - 1);
  };
  for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
    const auto& f = mesh.faces[fi];
    Vec3 flo = mesh.vertices[f[0]].cwiseMin(mesh.vertices[f[1]]).cwiseMin(mesh.vertices[f[2]]);
    Vec3 fhi = mesh.vertices[f[0]].cwiseMax(mesh.vertices[f[1]]).cwiseMax(mesh.vertices[f[2]]);
    for (int i = clamp3(flo.x(), 0); i <= clamp3(fhi.x(), 0); ++i)
      for (int j = clamp3(flo.y(), 1); j <= clamp3(fhi.y(), 1); ++j)
        for (int k = clamp3(flo.z(), 2); k <= clamp3(fhi.z(), 2); ++k)
          grid3_.cells[(static_cast<std::size_t>(k) * grid3_.n[1] + j) * grid3_.n[0] + i].push_back(static_cast<int>(fi));
  }

  // 2D buckets over the closed surface projected onto the plates
  std::vector<Vec3> extra;
  const auto caps = plate_caps(mesh, extra);
  auto vert = [&](int id) -> const Vec3& {
    return id < static_cast<int>(mesh.vertices.size()) ? mesh.vertices[id] : extra[id - mesh.vertices.size()];
  };
  auto add_flat = [&](const std::array<int, 3>& f) {
    Flat t;
    for (int k = 0; k < 3; ++k) {
      const Vec3& p = vert(f[k]);
      t.xy[k] = Vec2(p.dot(e1_), p.dot(e2_));
      t.z[k] = p.dot(axis_);
      t.id[k] = f[k];
    }
    const Vec2 u = t.xy[1] - t.xy[0], w = t.xy[2] - t.xy[0];
    const double area = u.x() * w.y() - u.y() * w.x();
    if (area == 0.0) return;  // vertical triangle: invisible to a vertical ray
    if (area < 0) {
      std::swap(t.xy[1], t.xy[2]);
      std::swap(t.z[1], t.z[2]);
      std::swap(t.id[1], t.id[2]);
    }
    flats_.push_back(t);
  };
  for (const auto& f : mesh.faces) add_flat(f);
  for (const auto& f : caps) add_flat(f);
  if (flats_.empty()) throw InvalidInput("mesh index: surface has no extent across the plates");
  Vec2 lo2 = flats_[0].xy[0], hi2 = lo2;
  for (const auto& t : flats_)
    for (const auto& q : t.xy) {
      lo2 = lo2.cwiseMin(q);
      hi2 = hi2.cwiseMax(q);
    }
  const Vec2 ext2 = (hi2 - lo2).cwiseMax(Vec2::Constant(1e-12));
  grid2_.lo = lo2;
  grid2_.cell = std::max(2.0 * mesh.mean_edge_length(), ext2.maxCoeff() / 256.0);
  for (int a = 0; a < 2; ++a) grid2_.n[a] = std::max(1, static_cast<int>(std::ceil(ext2[a] / grid2_.cell)));
  grid2_.cells.assign(static_cast<std::size_t>(grid2_.n[0]) * grid2_.n[1], {});
  auto clamp2 = [&](double x, int a) {
    return std::clamp(static_cast<int>(std::floor((x - grid2_.lo[a]) / grid2_.cell)), 0, grid2_.n[a] - 1);
  };
  for (std::size_t ti = 0; ti < flats_.size(); ++ti) {
    const auto& t = flats_[ti];
    const Vec2 tlo = t.xy[0].cwiseMin(t.xy[1]).cwiseMin(t.xy[2]);
    const Vec2 thi = t.xy[0].cwiseMax(t.xy[1]).cwiseMax(t.xy[2]);
    for (int i = clamp2(tlo.x(), 0); i <= clamp2(thi.x(), 0); ++i)
      for (int j = clamp2(tlo.y(), 1); j <= clamp2(thi.y(), 1); ++j)
        grid2_.cells[static_cast<std::size_t>(j) * grid2_.n[0] + i].push_back(static_cast<int>(ti));
  }
}

MeshIndex::Closest MeshIndex::closest(const Vec3& p) const {
  Closest best;
  best.distance = std::numeric_limits<double>::infinity();
  const Vec3 hi = grid3_.lo + grid3_.cell * Vec3(grid3_.n[0], grid3_.n[1], grid3_.n[2]);
  const Vec3 q = p.cwiseMax(grid3_.lo).cwiseMin(hi);
  std::array<int, 3> c;
  for (int a = 0; a < 3; ++a)
    c[a] = std::clamp(static_cast<int>(std::floor((q[a] - grid3_.lo[a]) / grid3_.cell)), 0, grid3_.n[a] - 1);
  const int rmax = std::max({grid3_.n[0], grid3_.n[1], grid3_.n[2]});
  auto visit = [&](int i, int j, int k) {
    for (int fi : grid3_.cells[(static_cast<std::size_t>(k) * grid3_.n[1] + j) * grid3_.n[0] + i]) {
      const auto& f = mesh_.faces[fi];
      int region = 6;
      const Vec3 x = closest_point_on_triangle(p, mesh_.vertices[f[0]], mesh_.vertices[f[1]], mesh_.vertices[f[2]], region);
      const double d = (x - p).norm();
      if (d < best.distance || (d == best.distance && fi < best.face)) {
        best.distance = d;
        best.face = fi;
        best.point = x;
        if (region < 3)
          best.on_open_edge = open_vertex_[f[region]];
        else if (region < 6)
          best.on_open_edge = open_edge_[fi][region - 3];
        else
          best.on_open_edge = false;
      }
    }
  };
  for (int r = 0; r <= rmax; ++r) {
    for (int i = c[0] - r; i <= c[0] + r; ++i) {
      if (i < 0 || i >= grid3_.n[0]) continue;
      for (int j = c[1] - r; j <= c[1] + r; ++j) {
        if (j < 0 || j >= grid3_.n[1]) continue;
        for (int k = c[2] - r; k <= c[2] + r; ++k) {
          if (k < 0 || k >= grid3_.n[2]) continue;
          if (std::max({std::abs(i - c[0]), std::abs(j - c[1]), std::abs(k - c[2])}) != r) continue;
          visit(i, j, k);
        }
      }
    }
    if (best.distance <= r * grid3_.cell) break;
  }
  return best;
}

bool MeshIndex::within(const Vec3& p, double bound) const {
  const Vec3 hi = grid3_.lo + grid3_.cell * Vec3(grid3_.n[0], grid3_.n[1], grid3_.n[2]);
  const Vec3 q = p.cwiseMax(grid3_.lo).cwiseMin(hi);
  if ((q - p).norm() > bound) return false;
  std::array<int, 3> lo, up;
  for (int a = 0; a < 3; ++a) {
    lo[a] = std::clamp(static_cast<int>(std::floor((q[a] - bound - grid3_.lo[a]) / grid3_.cell)), 0, grid3_.n[a] - 1);
    up[a] = std::clamp(static_cast<int>(std::floor((q[a] + bound - grid3_.lo[a]) / grid3_.cell)), 0, grid3_.n[a] - 1);
  }
  const double b2 = bound * bound;
  for (int k = lo[2]; k <= up[2]; ++k)
    for (int j = lo[1]; j <= up[1]; ++j)
      for (int i = lo[0]; i <= up[0]; ++i)
        for (int fi : grid3_.cells[(static_cast<std::size_t>(k) * grid3_.n[1] + j) * grid3_.n[0] + i]) {
          const auto& f = mesh_.faces[fi];
          int region = 6;
          const Vec3 x = closest_point_on_triangle(p, mesh_.vertices[f[0]], mesh_.vertices[f[1]], mesh_.vertices[f[2]], region);
          if ((x - p).squaredNorm() <= b2) return true;
        }
  return false;
}

bool MeshIndex::inside(const Vec3& p) const {
  const Vec2 xy(p.dot(e1_), p.dot(e2_));
  double z = p.dot(axis_);
  // points on a plate belong to the closed body when they sit over its cap
  if (z < plate_lo_ - plate_eps_ || z > plate_hi_ + plate_eps_) return false;
  z = std::clamp(z, plate_lo_ + plate_eps_, plate_hi_ - plate_eps_);
  const int i = static_cast<int>(std::floor((xy.x() - grid2_.lo.x()) / grid2_.cell));
  const int j = static_cast<int>(std::floor((xy.y() - grid2_.lo.y()) / grid2_.cell));
  if (i < 0 || j < 0 || i >= grid2_.n[0] || j >= grid2_.n[1]) return false;
  // cast toward the farther plate so points lying on a plate are not lost
  const bool upward = z <= mid_height_;
  int crossings = 0;
  for (int ti : grid2_.cells[static_cast<std::size_t>(j) * grid2_.n[0] + i]) {
    const Flat& t = flats_[ti];
    if (orient(t.xy[0], t.xy[1], xy) <= 0 || orient(t.xy[1], t.xy[2], xy) <= 0 || orient(t.xy[2], t.xy[0], xy) <= 0)
      continue;
    // barycentric height of the triangle above xy
    const Vec2 u = t.xy[1] - t.xy[0], w = t.xy[2] - t.xy[0], d = xy - t.xy[0];
    const double det = u.x() * w.y() - u.y() * w.x();
    const double b1 = (d.x() * w.y() - d.y() * w.x()) / det;
    const double b2 = (u.x() * d.y() - u.y() * d.x()) / det;
    const double zt = t.z[0] + b1 * (t.z[1] - t.z[0]) + b2 * (t.z[2] - t.z[0]);  // exact on flat caps
    if (upward ? zt > z : zt < z) ++crossings;
  }
  return crossings % 2 == 1;
}

double MeshIndex::signed_distance(const Vec3& p) const {
  const double d = closest(p).distance;
  return inside(p) ? -d : d;
}

}  // namespace slabsym
