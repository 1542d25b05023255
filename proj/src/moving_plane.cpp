#include "slabsym/moving_plane.hpp"

#include "slabsym/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <numbers>

namespace slabsym {

const char* to_string(TouchClass c) {
  switch (c) {
    case TouchClass::interior:
      return "interior";
    case TouchClass::boundary:
      return "boundary";
    default:
      return "degenerate_simultaneous";
  }
}

namespace {

Vec3 check_direction(const Slab& slab, const Vec3& direction) {
  const double n = direction.norm();
  if (!(n > 0.0) || !direction.allFinite()) throw InvalidInput("sweep: direction must be a nonzero vector");
  const Vec3 d = direction / n;
  if (std::abs(d.dot(slab.axis_normal.normalized())) > 1e-9)
    throw OrientationError("sweep: direction must be parallel to the plates");
  return d;
}

struct Exit {
  double distance = 0.0;
  int vertex = -1;
};

// Largest distance by which reflected cap vertices leave the body. With
// stop_above set, returns as soon as one vertex exceeds it.
Exit max_exit(const MeshIndex& index, const std::vector<double>& s, const Vec3& d, double t, double stop_above,
              std::vector<Exit>* all = nullptr) {
  const auto& V = index.mesh().vertices;
  Exit worst;
  for (std::size_t v = 0; v < V.size(); ++v) {
    if (!(s[v] < t)) continue;
    const Vec3 p = V[v] + 2.0 * (t - s[v]) * d;
    if (index.inside(p)) continue;
    if (!all && std::isfinite(stop_above) && index.within(p, stop_above)) continue;
    const double dist = index.closest(p).distance;
    if (all) all->push_back({dist, static_cast<int>(v)});
    if (dist > worst.distance) worst = {dist, static_cast<int>(v)};
    if (dist > stop_above) break;
  }
  return worst;
}

double rms_mismatch(const MeshIndex& index, const std::vector<int>& cap, const std::vector<double>& s, const Vec3& d,
                    double t) {
  const auto& V = index.mesh().vertices;
  double sum = 0.0;
  for (int v : cap) {
    const Vec3 p = V[v] + 2.0 * (t - s[v]) * d;
    const double dist = index.closest(p).distance;
    sum += dist * dist;
  }
  return cap.empty() ? 0.0 : std::sqrt(sum / cap.size());
}

}  // namespace

ReflectionComparison reflect_and_compare(const MeshIndex& index, const Plane& plane) {
  plane.validate();
  const SurfaceMesh& mesh = index.mesh();
  if (std::abs(plane.normal.dot(mesh.slab.axis_normal.normalized())) > 1e-9)
    throw OrientationError("reflection plane must be orthogonal to the plates");
  const auto plates = mesh.vertex_plates();
  ReflectionComparison out;
  for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
    if (!(plane.signed_distance(mesh.vertices[v]) < 0.0)) continue;
    const auto c = index.closest(reflect(mesh.vertices[v], plane));
    if (c.on_open_edge && plates[v] == 0) continue;
    ++out.compared;
    if (out.witness < 0 || c.distance > out.deviation) {
      out.deviation = c.distance;
      out.witness = static_cast<int>(v);
    }
  }
  out.empty_cap = out.compared == 0;
  return out;
}

ReflectionComparison reflect_and_compare(const SurfaceMesh& mesh, const Plane& plane) {
  return reflect_and_compare(MeshIndex(mesh), plane);
}

SweepResult first_touch(const MeshIndex& index, const Vec3& direction, const SweepOptions& opt) {
  const SurfaceMesh& mesh = index.mesh();
  const Vec3 d = check_direction(mesh.slab, direction);
  if (opt.scan_steps < 2) throw InvalidInput("sweep: scan_steps must be >= 2");
  const double h = mesh.max_edge_length();
  const double tol = opt.contact_tol > 0.0 ? opt.contact_tol : 2.0 * h * h;

  std::vector<double> s(mesh.vertices.size());
  for (std::size_t v = 0; v < s.size(); ++v) s[v] = mesh.vertices[v].dot(d);
  SweepResult r;
  r.direction = d;
  r.contact_tol = tol;
  r.t_min = *std::min_element(s.begin(), s.end());
  r.t_max = *std::max_element(s.begin(), s.end());
  const double extent = r.t_max - r.t_min;
  if (!(extent > 0.0)) throw InvalidInput("sweep: mesh has no extent along the direction");

  double lo = r.t_min, hi = r.t_max;
  bool hit = false;
  for (int k = 1; k <= opt.scan_steps; ++k) {
    const double t = r.t_min + extent * k / opt.scan_steps;
    const Exit e = max_exit(index, s, d, t, tol);
    r.profile.emplace_back(t, e.distance);
    if (e.distance > tol) {
      hi = t;
      hit = true;
      break;
    }
    lo = t;
  }
  if (hit) {
    while (hi - lo > opt.bisection_rel * extent) {
      const double mid = 0.5 * (lo + hi);
      if (max_exit(index, s, d, mid, tol).distance > tol)
        hi = mid;
      else
        lo = mid;
    }
  }
  r.t_star = lo;

  // touch points: reflected vertices leaving the body at the first violating offset
  std::vector<Exit> exits;
  const Exit worst = max_exit(index, s, d, hi, INFINITY, &exits);
  std::vector<Exit> witnesses;
  for (const auto& e : exits)
    if (worst.distance > 0.0 && e.distance >= 0.5 * worst.distance) witnesses.push_back(e);
  std::stable_sort(witnesses.begin(), witnesses.end(), [](const Exit& a, const Exit& b) { return a.distance > b.distance; });
  for (std::size_t k = 0; k < witnesses.size() && k < 32; ++k) {
    const int v = witnesses[k].vertex;
    r.touch_points.push_back(mesh.vertices[v] + 2.0 * (hi - s[v]) * d);
  }

  // classification
  const auto plates = mesh.vertex_plates();
  const Vec3 axis = mesh.slab.axis_normal.normalized();
  bool degenerate = false;
  if (witnesses.size() >= 3) {
    Vec3 lo_b = Vec3::Constant(INFINITY), hi_b = Vec3::Constant(-INFINITY);
    Vec3 mlo = lo_b, mhi = hi_b;
    const Vec3 side = axis.cross(d);
    auto coords = [&](const Vec3& p) { return Vec3(p.dot(d), p.dot(side), p.dot(axis)); };
    for (const auto& w : witnesses) {
      const Vec3 q = coords(mesh.vertices[w.vertex]);
      lo_b = lo_b.cwiseMin(q);
      hi_b = hi_b.cwiseMax(q);
    }
    for (const auto& p : mesh.vertices) {
      const Vec3 q = coords(p);
      mlo = mlo.cwiseMin(q);
      mhi = mhi.cwiseMax(q);
    }
    const Vec3 span = hi_b - lo_b, ext = mhi - mlo;
    degenerate = span.y() >= 0.25 * ext.y() && span.z() >= 0.25 * ext.z();
  }
  if (worst.vertex >= 0) {
    const Vec3 p = mesh.vertices[worst.vertex] + 2.0 * (hi - s[worst.vertex]) * d;
    const auto c = index.closest(p);
    const Vec3 nv = mesh.vertex_normals()[worst.vertex];
    const Vec3 nr = nv - 2.0 * nv.dot(d) * d;
    r.normals_agree = c.face >= 0 && nr.dot(mesh.face_normal(c.face)) > 0.9;
    if (degenerate)
      r.touch_class = TouchClass::degenerate_simultaneous;
    else if (plates[worst.vertex] != 0 || c.on_open_edge)
      r.touch_class = TouchClass::boundary;
    else
      r.touch_class = TouchClass::interior;
  }

  if (r.touch_class == TouchClass::degenerate_simultaneous && opt.refine_degenerate) {
    const double w = 2.0 * h;
    std::vector<int> cap;
    for (std::size_t v = 0; v < s.size(); ++v)
      if (s[v] < r.t_star - w) cap.push_back(static_cast<int>(v));
    if (!cap.empty()) {
      const double base = r.t_star - w;
      const int bits = std::clamp(static_cast<int>(std::ceil(-std::log2(opt.bisection_rel * extent / (2 * w)))) + 2, 8, 40);
      boost::uintmax_t iters = 100;
      const auto best = boost::math::tools::brent_find_minima(
          [&](double x) { return rms_mismatch(index, cap, s, d, base + x); }, 0.0, 2 * w, bits, iters);
      r.t_star = base + best.first;
    }
  }
  r.symmetry_plane.normal = d;
  r.symmetry_plane.point = r.t_star * d;
  return r;
}

SweepResult sweep_direction(const MeshIndex& index, const Vec3& direction, const SweepOptions& opt) {
  SweepResult r = first_touch(index, direction, opt);
  const ReflectionComparison c = reflect_and_compare(index, r.symmetry_plane);
  r.empty_cap = c.empty_cap;
  r.deviation = c.deviation;
  return r;
}

SweepResult sweep_direction(const SurfaceMesh& mesh, const Vec3& direction, const SweepOptions& opt) {
  return sweep_direction(MeshIndex(mesh), direction, opt);
}

std::vector<Vec3> sweep_directions(const Slab& slab, int count) {
  if (count < 1) throw InvalidInput("sweep: need at least one direction");
  const auto [e1, e2] = slab.plate_frame();
  std::vector<Vec3> out;
  for (int k = 0; k < count; ++k) {
    const double a = std::numbers::pi * k / count;
    out.push_back(std::cos(a) * e1 + std::sin(a) * e2);
  }
  return out;
}

std::vector<SweepResult> sweep_all(const MeshIndex& index, const std::vector<Vec3>& directions, const SweepOptions& opt) {
  std::vector<std::future<SweepResult>> jobs;
  for (const auto& d : directions)
    jobs.push_back(std::async(std::launch::async, [&index, d, &opt] { return sweep_direction(index, d, opt); }));
  std::vector<SweepResult> out;
  for (auto& j : jobs) out.push_back(j.get());
  return out;
}

SymmetryReport extract_symmetry_axis(const std::vector<SweepResult>& results, const Slab& slab, double symmetry_tol) {
  SymmetryReport rep;
  rep.sweeps = results;
  rep.symmetry_tol = symmetry_tol;
  const auto [e1, e2] = slab.plate_frame();
  const Vec3 axis = slab.axis_normal.normalized();
  std::vector<Vec2> normals;
  std::vector<double> offsets;
  bool any = false;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const auto& r = results[k];
    if (r.empty_cap) continue;
    if (!any || r.deviation > rep.max_deviation) {
      rep.max_deviation = r.deviation;
      rep.witness_direction = static_cast<int>(k);
    }
    any = true;
    if (r.deviation > symmetry_tol) continue;
    Vec2 n(r.symmetry_plane.normal.dot(e1), r.symmetry_plane.normal.dot(e2));
    const double len = n.norm();
    normals.push_back(n / len);
    offsets.push_back(r.symmetry_plane.normal.dot(r.symmetry_plane.point) / len);
  }
  rep.symmetric = any && rep.max_deviation <= symmetry_tol;
  rep.planes_used = static_cast<int>(normals.size());
  bool independent = false;
  for (std::size_t a = 0; a < normals.size() && !independent; ++a)
    for (std::size_t b = a + 1; b < normals.size(); ++b)
      if (std::abs(normals[a].x() * normals[b].y() - normals[a].y() * normals[b].x()) > 1e-3) {
        independent = true;
        break;
      }
  if (!independent) return rep;
  Mat2 M = Mat2::Zero();
  Vec2 rhs = Vec2::Zero();
  for (std::size_t k = 0; k < normals.size(); ++k) {
    M += normals[k] * normals[k].transpose();
    rhs += offsets[k] * normals[k];
  }
  const Vec2 c = M.ldlt().solve(rhs);
  double res = 0.0;
  for (std::size_t k = 0; k < normals.size(); ++k) res = std::max(res, std::abs(normals[k].dot(c) - offsets[k]));
  rep.axis = SymmetryAxis{c.x() * e1 + c.y() * e2 + slab.offset_lo * axis, axis};
  rep.axis_residual = res;
  return rep;
}

namespace {
nlohmann::json vec(const Vec3& v) { return {v.x(), v.y(), v.z()}; }
}  // namespace

nlohmann::json SweepResult::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : touch_points) pts.push_back(vec(p));
  nlohmann::json prof = nlohmann::json::array();
  for (const auto& [t, v] : profile) prof.push_back({t, v});
  return {{"direction", vec(direction)},
          {"t_star", t_star},
          {"t_range", {t_min, t_max}},
          {"touch_class", to_string(touch_class)},
          {"touch_points", pts},
          {"normals_agree", normals_agree},
          {"symmetry_plane", {{"point", vec(symmetry_plane.point)}, {"normal", vec(symmetry_plane.normal)}}},
          {"deviation", empty_cap ? nlohmann::json(nullptr) : nlohmann::json(deviation)},
          {"empty_cap", empty_cap},
          {"contact_tol", contact_tol},
          {"profile", prof}};
}

nlohmann::json SymmetryReport::to_json() const {
  nlohmann::json sw = nlohmann::json::array();
  for (const auto& s : sweeps) sw.push_back(s.to_json());
  nlohmann::json j = {{"sweeps", sw},
                      {"max_deviation", max_deviation},
                      {"symmetry_tol", symmetry_tol},
                      {"verdict", symmetric ? "symmetric" : "asymmetric"},
                      {"witness_direction", witness_direction},
                      {"planes_used", planes_used}};
  if (axis) {
    j["axis"] = {{"point", vec(axis->point)}, {"direction", vec(axis->direction)}, {"residual", axis_residual}};
  } else {
    j["axis"] = nullptr;
  }
  return j;
}

void write_sweep_profile_csv(const SweepResult& r, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  os << "t,deviation\n";
  os.precision(17);
  for (const auto& [t, v] : r.profile) os << t << ',' << v << '\n';
}

}  // namespace slabsym
