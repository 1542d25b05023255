#include "slabsym/body.hpp"

#include "slabsym/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace slabsym {

SurfaceMesh graph_body_mesh(const ScalarField& u, const GraphBodyOptions& opt) {
  u.validate();
  const Region& region = u.grid->region();
  if (!region.star_shaped()) throw InvalidInput("graph body: region must be star-shaped about its center");
  if (opt.angular < 16 || opt.angular % 16 != 0) throw InvalidInput("graph body: angular count must be a positive multiple of 16");
  if (opt.wall_rows < 1) throw InvalidInput("graph body: need at least one wall row");
  const int N = opt.angular;
  const int K = opt.radial > 0 ? opt.radial : std::max(4, static_cast<int>(std::lround(N / (2 * std::numbers::pi))));
  const Vec2 c = region.center();

  SurfaceMesh m;
  double umin = *std::min_element(u.values.begin(), u.values.end());
  double umax = *std::max_element(u.values.begin(), u.values.end());
  auto top = [&](const Vec2& x) { return Vec3(x.x(), x.y(), interpolate(u, x)); };
  m.vertices.push_back(top(c));
  std::vector<double> extent(N);
  for (int i = 0; i < N; ++i) extent[i] = region.radial_extent(2 * std::numbers::pi * i / N);
  auto ring_vertex = [&](int k, int i) { return 1 + (k - 1) * N + (i % N); };
  for (int k = 1; k <= K; ++k) {
    for (int i = 0; i < N; ++i) {
      const double t = 2 * std::numbers::pi * i / N;
      const Vec2 x = c + (extent[i] * k / K) * Vec2(std::cos(t), std::sin(t));
      m.vertices.push_back(top(x));
    }
  }
  for (const auto& v : m.vertices) {
    umin = std::min(umin, v.z());
    umax = std::max(umax, v.z());
  }
  const auto [lo, hi] = region.bounds();
  const double diam = (hi - lo).norm();
  const double zlo = umin - opt.bottom_margin * diam;
  const double zhi = umax + opt.top_margin * diam;
  bool up = opt.wall == WallSide::up;
  if (opt.wall == WallSide::automatic) {
    double rim = 0.0, mean = 0.0;
    for (int i = 0; i < N; ++i) rim += m.vertices[ring_vertex(K, i)].z() / N;
    for (double v : u.values) mean += v / u.values.size();
    up = rim > mean;
  }
  const double z0 = up ? zhi : zlo;
  for (int i = 0; i < N; ++i) m.faces.push_back({0, ring_vertex(1, i), ring_vertex(1, i + 1)});
  for (int k = 1; k < K; ++k) {
    for (int i = 0; i < N; ++i) {
      m.faces.push_back({ring_vertex(k, i), ring_vertex(k + 1, i), ring_vertex(k + 1, i + 1)});
      m.faces.push_back({ring_vertex(k, i), ring_vertex(k + 1, i + 1), ring_vertex(k, i + 1)});
    }
  }
  // wall: row 0 is the rim ring, row R lies on the plate
  const int R = opt.wall_rows;
  const int wall_base = static_cast<int>(m.vertices.size());
  auto wall_vertex = [&](int j, int i) { return j == 0 ? ring_vertex(K, i) : wall_base + (j - 1) * N + (i % N); };
  for (int j = 1; j <= R; ++j) {
    for (int i = 0; i < N; ++i) {
      const Vec3& rim = m.vertices[ring_vertex(K, i)];
      const double s = double(j) / R;
      m.vertices.emplace_back(rim.x(), rim.y(), j == R ? z0 : (1 - s) * rim.z() + s * z0);
    }
  }
  for (int j = 0; j < R; ++j) {
    for (int i = 0; i < N; ++i) {
      const int Ui = wall_vertex(j, i), Uj = wall_vertex(j, i + 1);
      const int Li = wall_vertex(j + 1, i), Lj = wall_vertex(j + 1, i + 1);
      m.faces.push_back({Li, Lj, Uj});
      m.faces.push_back({Li, Uj, Ui});
    }
  }
  BoundaryLoop loop;
  loop.plate = up ? 2 : 1;
  for (int i = 0; i < N; ++i) loop.vertices.push_back(wall_vertex(R, i));
  m.loops.push_back(loop);
  m.slab.axis_normal = Vec3::UnitZ();
  m.slab.offset_lo = zlo;
  m.slab.offset_hi = zhi;
  if (up)
    for (auto& f : m.faces) std::swap(f[1], f[2]);
  validate_mesh(m);
  return m;
}

SurfaceMesh perturb_mesh(const SurfaceMesh& mesh, const Vec3& at, double amplitude, double sigma) {
  if (!(sigma > 0.0)) throw InvalidInput("perturbation: sigma must be positive");
  SurfaceMesh out = mesh;
  const auto normals = mesh.vertex_normals();
  const auto plates = mesh.vertex_plates();
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (plates[v] != 0) continue;
    const double r2 = (mesh.vertices[v] - at).squaredNorm();
    out.vertices[v] += amplitude * std::exp(-r2 / (2 * sigma * sigma)) * normals[v];
  }
  return out;
}

int nearest_vertex(const SurfaceMesh& mesh, const Vec3& p) {
  int best = -1;
  double bd = INFINITY;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    const double d = (mesh.vertices[v] - p).squaredNorm();
    if (d < bd) {
      bd = d;
      best = static_cast<int>(v);
    }
  }
  return best;
}

}  // namespace slabsym
