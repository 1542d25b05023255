#include "slabsym/boundary_curve.hpp"

#include "slabsym/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

namespace slabsym {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = cross2(q2 - q1, p1 - q1), d2 = cross2(q2 - q1, p2 - q1);
  const double d3 = cross2(p2 - p1, q1 - p1), d4 = cross2(p2 - p1, q2 - p1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

}  // namespace

void BoundaryCurve::validate() const {
  if (plate_id != 1 && plate_id != 2) throw InvalidInput("boundary curve: plate id must be 1 or 2");
  const std::size_t n = vertices.size();
  if (n < 3) throw InvalidInput("boundary curve: need at least 3 vertices");
  if (signed_area(vertices) <= 0.0) throw InvalidInput("boundary curve: must be counterclockwise");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(vertices[i], vertices[(i + 1) % n], vertices[j], vertices[(j + 1) % n]))
        throw InvalidInput("boundary curve: polyline self-intersects");
    }
  if (alpha && std::abs(alpha->direction.norm() - 1.0) > 1e-12)
    throw InvalidInput("boundary curve: alpha direction must be unit length");
}

double BoundaryCurve::diameter() const {
  Vec2 lo = vertices.front(), hi = vertices.front();
  for (const auto& v : vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return (hi - lo).norm();
}

BoundaryCurve BoundaryCurve::circle(int plate, const Vec2& center, double radius, int n) {
  return ellipse(plate, center, radius, radius, n);
}

BoundaryCurve BoundaryCurve::ellipse(int plate, const Vec2& center, double a, double b, int n) {
  BoundaryCurve c;
  c.plate_id = plate;
  for (int k = 0; k < n; ++k) {
    const double t = 2.0 * std::numbers::pi * k / n;
    c.vertices.push_back(center + Vec2(a * std::cos(t), b * std::sin(t)));
  }
  return c;
}

BoundaryCurve BoundaryCurve::symmetric_graph(int plate, const SymmetryLine& alpha, double a_min, double a_max,
                                             const std::vector<double>& f) {
  const std::size_t m = f.size();
  if (m < 3) throw InvalidInput("symmetric graph: need at least 3 samples");
  if (!(a_min < a_max)) throw InvalidInput("symmetric graph: a_min must be below a_max");
  if (f.front() != 0.0 || f.back() != 0.0) throw InvalidInput("symmetric graph: f must vanish on the border");
  for (std::size_t k = 1; k + 1 < m; ++k)
    if (!(f[k] > 0.0)) throw InvalidInput("symmetric graph: f must be positive in the interior");
  BoundaryCurve c;
  c.plate_id = plate;
  c.alpha = alpha;
  c.alpha->direction.normalize();
  c.a_min = a_min;
  c.a_max = a_max;
  c.f_samples = f;
  const Vec2 d = c.alpha->direction;
  const Vec2 side = c.alpha->normal();  // right of d
  auto a_at = [&](std::size_t k) { return a_min + (a_max - a_min) * double(k) / double(m - 1); };
  // right side forward, then the mirrored left side backward: counterclockwise
  for (std::size_t k = 0; k < m; ++k) c.vertices.push_back(alpha.point + a_at(k) * d + f[k] * side);
  for (std::size_t k = m - 2; k >= 1; --k) c.vertices.push_back(alpha.point + a_at(k) * d - f[k] * side);
  c.validate();
  return c;
}

std::shared_ptr<const Region> BoundaryCurve::region() const {
  if (alpha) {
    const Vec2 center = alpha->point + 0.5 * (a_min + a_max) * alpha->direction;
    if (!f_samples.empty()) return std::make_shared<PolygonRegion>(vertices, center);
    // project the centroid onto alpha
    const Vec2 c = polygon_centroid(vertices);
    return std::make_shared<PolygonRegion>(
        vertices, alpha->point + (c - alpha->point).dot(alpha->direction) * alpha->direction);
  }
  return std::make_shared<PolygonRegion>(vertices);
}

std::vector<double> boundary_mean_curvature(const BoundaryCurve& curve) {
  const std::size_t n = curve.vertices.size();
  if (n < 8) throw InvalidInput("boundary curvature: need at least 8 vertices");
  const double tiny = 1e-12 * curve.diameter();
  std::vector<double> k(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = curve.vertices[(i + n - 1) % n];
    const Vec2& b = curve.vertices[i];
    const Vec2& c = curve.vertices[(i + 1) % n];
    const double ab = (b - a).norm(), bc = (c - b).norm(), ca = (a - c).norm();
    if (ab < tiny || bc < tiny) throw InvalidInput("boundary curvature: degenerate consecutive vertices");
    k[i] = 2.0 * cross2(b - a, c - b) / (ab * bc * ca);
  }
  return k;
}

BoundaryCurve read_boundary_curve(const std::string& csv_path, const std::string& json_path) {
  std::ifstream in(csv_path);
  if (!in) throw IoError("cannot open '" + csv_path + "'");
  BoundaryCurve c;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    for (char& ch : line)
      if (ch == ',') ch = ' ';
    std::istringstream ls(line);
    double x, y;
    if (ls >> x >> y) c.vertices.emplace_back(x, y);
  }
  if (!json_path.empty()) {
    std::ifstream js(json_path);
    if (!js) throw IoError("cannot open '" + json_path + "'");
    try {
      nlohmann::json j;
      js >> j;
      c.plate_id = j.value("plate_id", 1);
      if (j.contains("alpha") && !j["alpha"].is_null()) {
        const auto p = j["alpha"].at("point").get<std::vector<double>>();
        const auto d = j["alpha"].at("direction").get<std::vector<double>>();
        c.alpha = SymmetryLine{Vec2(p.at(0), p.at(1)), Vec2(d.at(0), d.at(1)).normalized()};
      }
    } catch (const nlohmann::json::exception& e) {
      throw IoError("bad curve metadata '" + json_path + "': " + e.what());
    }
  }
  c.validate();
  return c;
}

void write_boundary_curve(const BoundaryCurve& curve, const std::string& csv_path, const std::string& json_path) {
  std::ofstream out(csv_path);
  if (!out) throw IoError("cannot open '" + csv_path + "' for writing");
  out << "x,y\n";
  char buf[96];
  for (const auto& v : curve.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v.x(), v.y());
    out << buf;
  }
  nlohmann::json j;
  j["plate_id"] = curve.plate_id;
  if (curve.alpha)
    j["alpha"] = {{"point", {curve.alpha->point.x(), curve.alpha->point.y()}},
                  {"direction", {curve.alpha->direction.x(), curve.alpha->direction.y()}}};
  else
    j["alpha"] = nullptr;
  std::ofstream js(json_path);
  if (!js) throw IoError("cannot open '" + json_path + "' for writing");
  js << j.dump(2) << '\n';
}

}  // namespace slabsym
