#include "slabsym/mesh.hpp"

#include "slabsym/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace slabsym {

namespace {

std::int64_t edge_key(int a, int b, std::size_t n) {
  const int lo = std::min(a, b), hi = std::max(a, b);
  return static_cast<std::int64_t>(lo) * static_cast<std::int64_t>(n) + hi;
}

struct EdgeUse {
  int count = 0;
  int forward = 0;  // uses as (lo -> hi)
};

std::unordered_map<std::int64_t, EdgeUse> edge_uses(const SurfaceMesh& mesh) {
  std::unordered_map<std::int64_t, EdgeUse> uses;
  const std::size_t n = mesh.vertices.size();
  for (const auto& f : mesh.faces) {
    for (int e = 0; e < 3; ++e) {
      const int a = f[e], b = f[(e + 1) % 3];
      auto& u = uses[edge_key(a, b, n)];
      ++u.count;
      if (a < b) ++u.forward;
    }
  }
  return uses;
}

}  // namespace

Vec3 SurfaceMesh::face_normal(int f) const {
  const auto& t = faces[f];
  const Vec3 n = (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]);
  const double len = n.norm();
  return len > 0.0 ? Vec3(n / len) : Vec3::Zero();
}

double SurfaceMesh::face_area(int f) const {
  const auto& t = faces[f];
  return 0.5 * (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]).norm();
}

std::vector<Vec3> SurfaceMesh::vertex_normals() const {
  std::vector<Vec3> acc(vertices.size(), Vec3::Zero());
  for (const auto& t : faces) {
    const Vec3 n = (vertices[t[1]] - vertices[t[0]]).cross(vertices[t[2]] - vertices[t[0]]);
    for (int v : t) acc[v] += n;  // |n| = 2 * area
  }
  for (auto& n : acc) {
    const double len = n.norm();
    if (len > 0.0) n /= len;
  }
  return acc;
}

double SurfaceMesh::diameter() const {
  if (vertices.empty()) return 0.0;
  Vec3 lo = vertices[0], hi = vertices[0];
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

double SurfaceMesh::max_edge_length() const {
  double m = 0.0;
  for (const auto& t : faces)
    for (int e = 0; e < 3; ++e) m = std::max(m, (vertices[t[e]] - vertices[t[(e + 1) % 3]]).norm());
  return m;
}

double SurfaceMesh::mean_edge_length() const {
  if (faces.empty()) return 0.0;
  double s = 0.0;
  for (const auto& t : faces)
    for (int e = 0; e < 3; ++e) s += (vertices[t[e]] - vertices[t[(e + 1) % 3]]).norm();
  return s / (3.0 * faces.size());
}

std::vector<int> SurfaceMesh::vertex_plates() const {
  std::vector<int> plate(vertices.size(), 0);
  for (const auto& loop : loops)
    for (int v : loop.vertices) plate[v] = loop.plate;
  return plate;
}

MeshCheck check_mesh(const SurfaceMesh& mesh) {
  MeshCheck c;
  auto fail = [&](bool MeshCheck::*flag, const std::string& msg) {
    if (c.*flag) {
      c.*flag = false;
      if (c.message.empty()) c.message = msg;
    }
  };
  for (const auto& f : mesh.faces)
    for (int v : f)
      if (v < 0 || static_cast<std::size_t>(v) >= mesh.vertices.size())
        fail(&MeshCheck::manifold, "face references a missing vertex");
  if (!c.manifold) return c;
  for (const auto& [key, use] : edge_uses(mesh)) {
    if (use.count > 2) fail(&MeshCheck::manifold, "edge shared by more than two faces");
    if (use.count == 2 && use.forward != 1) fail(&MeshCheck::oriented, "inconsistent face winding");
  }
  const double tol = 1e-9 * std::max(mesh.diameter(), 1e-300);
  for (const auto& loop : mesh.loops) {
    double plate_z = 0.0;
    try {
      plate_z = mesh.slab.plate_offset(loop.plate);
    } catch (const Error&) {
      fail(&MeshCheck::loops_on_plates, "boundary loop has an invalid plate id");
      continue;
    }
    for (int v : loop.vertices)
      if (std::abs(mesh.slab.height(mesh.vertices[v]) - plate_z) > tol)
        fail(&MeshCheck::loops_on_plates, "boundary-loop vertex off its plate");
  }
  for (const auto& v : mesh.vertices)
    if (!mesh.slab.contains(v, tol)) fail(&MeshCheck::inside_slab, "vertex outside the slab");
  return c;
}

void validate_mesh(const SurfaceMesh& mesh) {
  const MeshCheck c = check_mesh(mesh);
  if (!c.ok()) throw InvalidInput("mesh: " + c.message);
}

std::vector<std::array<int, 2>> boundary_edges(const SurfaceMesh& mesh) {
  const auto uses = edge_uses(mesh);
  const std::size_t n = mesh.vertices.size();
  std::vector<std::array<int, 2>> out;
  for (const auto& f : mesh.faces)
    for (int e = 0; e < 3; ++e) {
      const int a = f[e], b = f[(e + 1) % 3];
      if (uses.at(edge_key(a, b, n)).count == 1) out.push_back({a, b});
    }
  return out;
}

std::vector<std::array<int, 3>> plate_caps(const SurfaceMesh& mesh, std::vector<Vec3>& extra) {
  std::vector<std::array<int, 3>> caps;
  const int base = static_cast<int>(mesh.vertices.size());
  for (const auto& loop : mesh.loops) {
    Vec3 c = Vec3::Zero();
    for (int v : loop.vertices) c += mesh.vertices[v];
    c /= static_cast<double>(loop.vertices.size());
    const int ci = base + static_cast<int>(extra.size());
    extra.push_back(c);
    const Vec3 out_dir = loop.plate == 1 ? Vec3(-mesh.slab.axis_normal) : Vec3(mesh.slab.axis_normal);
    const std::size_t m = loop.vertices.size();
    for (std::size_t k = 0; k < m; ++k) {
      int a = loop.vertices[k], b = loop.vertices[(k + 1) % m];
      const Vec3 n = (mesh.vertices[a] - c).cross(mesh.vertices[b] - c);
      if (n.dot(out_dir) < 0.0) std::swap(a, b);
      caps.push_back({ci, a, b});
    }
  }
  return caps;
}

double enclosed_volume(const SurfaceMesh& mesh) {
  std::vector<Vec3> extra;
  const auto caps = plate_caps(mesh, extra);
  auto vtx = [&](int i) -> const Vec3& {
    return i < static_cast<int>(mesh.vertices.size()) ? mesh.vertices[i] : extra[i - mesh.vertices.size()];
  };
  double vol = 0.0;
  for (const auto& t : mesh.faces) vol += vtx(t[0]).dot(vtx(t[1]).cross(vtx(t[2])));
  for (const auto& t : caps) vol += vtx(t[0]).dot(vtx(t[1]).cross(vtx(t[2])));
  return vol / 6.0;
}

SurfaceMesh tube_mesh(int rings, int segments, const std::function<Vec3(int, int)>& point,
                      const Slab& slab, bool tag_plates) {
  if (rings < 2 || segments < 3) throw InvalidInput("tube mesh: need >= 2 rings and >= 3 segments");
  SurfaceMesh m;
  m.slab = slab;
  m.vertices.reserve(static_cast<std::size_t>(rings) * segments);
  for (int r = 0; r < rings; ++r)
    for (int s = 0; s < segments; ++s) m.vertices.push_back(point(r, s));
  auto id = [segments](int r, int s) { return r * segments + (s % segments); };
  for (int r = 0; r + 1 < rings; ++r)
    for (int s = 0; s < segments; ++s) {
      m.faces.push_back({id(r, s), id(r, s + 1), id(r + 1, s + 1)});
      m.faces.push_back({id(r, s), id(r + 1, s + 1), id(r + 1, s)});
    }
  if (tag_plates) {
    BoundaryLoop lo{{}, 1}, hi{{}, 2};
    for (int s = 0; s < segments; ++s) {
      lo.vertices.push_back(id(0, s));
      hi.vertices.push_back(id(rings - 1, s));
    }
    m.loops = {lo, hi};
  }
  return m;
}

SurfaceMesh ellipsoid_mesh(const Vec3& center, const Vec3& axes, int segments, int stacks) {
  if (segments < 3 || stacks < 3) throw InvalidInput("ellipsoid mesh: too coarse");
  SurfaceMesh m;
  m.slab.axis_normal = Vec3::UnitZ();
  m.slab.offset_lo = center.z() - axes.z();
  m.slab.offset_hi = center.z() + axes.z();
  const int south = 0;
  m.vertices.push_back(center - Vec3(0, 0, axes.z()));
  // rings from south to north, counterclockwise about +z
  for (int k = 1; k < stacks; ++k) {
    const double polar = std::numbers::pi * (1.0 - double(k) / stacks);  // from +z
    for (int s = 0; s < segments; ++s) {
      const double az = 2.0 * std::numbers::pi * s / segments;
      m.vertices.push_back(center + Vec3(axes.x() * std::sin(polar) * std::cos(az),
                                         axes.y() * std::sin(polar) * std::sin(az),
                                         axes.z() * std::cos(polar)));
    }
  }
  const int north = static_cast<int>(m.vertices.size());
  m.vertices.push_back(center + Vec3(0, 0, axes.z()));
  auto id = [segments](int ring, int s) { return 1 + ring * segments + (s % segments); };
  const int rings = stacks - 1;
  for (int s = 0; s < segments; ++s) m.faces.push_back({south, id(0, s + 1), id(0, s)});
  for (int r = 0; r + 1 < rings; ++r)
    for (int s = 0; s < segments; ++s) {
      m.faces.push_back({id(r, s), id(r, s + 1), id(r + 1, s + 1)});
      m.faces.push_back({id(r, s), id(r + 1, s + 1), id(r + 1, s)});
    }
  for (int s = 0; s < segments; ++s) m.faces.push_back({north, id(rings - 1, s), id(rings - 1, s + 1)});
  return m;
}

SurfaceMesh sphere_mesh(const Vec3& center, double radius, int segments, int stacks) {
  return ellipsoid_mesh(center, Vec3::Constant(radius), segments, stacks);
}

SurfaceMesh graph_patch_mesh(const std::function<double(double, double)>& f, double half, int n) {
  SurfaceMesh m;
  const double h = 2.0 * half / n;
  double zlo = 1e300, zhi = -1e300;
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) {
      const double x = -half + i * h, y = -half + j * h;
      const double z = f(x, y);
      zlo = std::min(zlo, z);
      zhi = std::max(zhi, z);
      m.vertices.emplace_back(x, y, z);
    }
  auto id = [n](int i, int j) { return j * (n + 1) + i; };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      m.faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      m.faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  m.slab.offset_lo = zlo - 1.0;
  m.slab.offset_hi = zhi + 1.0;
  return m;
}

void write_obj(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  char buf[128];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  for (const auto& f : mesh.faces) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

void write_loops_json(const SurfaceMesh& mesh, const std::string& path) {
  nlohmann::json j;
  const Vec3& a = mesh.slab.axis_normal;
  j["slab"] = {{"axis_normal", {a.x(), a.y(), a.z()}},
               {"offset_lo", mesh.slab.offset_lo},
               {"offset_hi", mesh.slab.offset_hi}};
  j["loops"] = nlohmann::json::array();
  for (const auto& loop : mesh.loops) j["loops"].push_back({{"plate", loop.plate}, {"vertices", loop.vertices}});
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

SurfaceMesh read_obj(const std::string& obj_path, const std::string& loops_json_path) {
  std::ifstream in(obj_path);
  if (!in) throw IoError("cannot open '" + obj_path + "'");
  SurfaceMesh m;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      double x, y, z;
      if (!(ls >> x >> y >> z)) throw IoError("bad vertex line in '" + obj_path + "'");
      m.vertices.emplace_back(x, y, z);
    } else if (tag == "f") {
      std::array<int, 3> f{};
      for (int& idx : f) {
        std::string tok;
        if (!(ls >> tok)) throw IoError("bad face line in '" + obj_path + "'");
        idx = std::stoi(tok.substr(0, tok.find('/'))) - 1;
      }
      m.faces.push_back(f);
    }
  }
  if (!loops_json_path.empty()) {
    std::ifstream js(loops_json_path);
    if (!js) throw IoError("cannot open '" + loops_json_path + "'");
    nlohmann::json j;
    try {
      js >> j;
      const auto& s = j.at("slab");
      const auto a = s.at("axis_normal").get<std::vector<double>>();
      m.slab.axis_normal = Vec3(a.at(0), a.at(1), a.at(2));
      m.slab.offset_lo = s.at("offset_lo").get<double>();
      m.slab.offset_hi = s.at("offset_hi").get<double>();
      for (const auto& l : j.at("loops"))
        m.loops.push_back({l.at("vertices").get<std::vector<int>>(), l.at("plate").get<int>()});
    } catch (const nlohmann::json::exception& e) {
      throw IoError("bad loops sidecar '" + loops_json_path + "': " + e.what());
    }
  }
  return m;
}

}  // namespace slabsym
