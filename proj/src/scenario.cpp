#include "slabsym/scenario.hpp"

#include "slabsym/errors.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace slabsym {

namespace {

using nlohmann::json;

Vec2 vec2(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 2) throw InvalidInput(std::string("scenario: ") + what + " must be [x, y]");
  return Vec2(j[0].get<double>(), j[1].get<double>());
}

Vec3 vec3(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) throw InvalidInput(std::string("scenario: ") + what + " must be [x, y, z]");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

void parse_domain(Scenario& s, const json& d, const std::string& base_dir) {
  const std::string kind = d.at("kind").get<std::string>();
  if (kind == "disk") {
    const Vec2 c = vec2(d.value("center", json::array({0.0, 0.0})), "domain.center");
    const double r = d.at("radius").get<double>();
    if (!(r > 0.0)) throw InvalidInput("scenario: disk radius must be positive");
    s.region = std::make_shared<DiskRegion>(c, r);
    s.disk_center = c;
  } else if (kind == "symmetric_graph") {
    SymmetryLine alpha;
    alpha.point = vec2(d.at("alpha").at("point"), "domain.alpha.point");
    alpha.direction = vec2(d.at("alpha").at("direction"), "domain.alpha.direction");
    if (!(alpha.direction.norm() > 0.0)) throw InvalidInput("scenario: alpha direction must be nonzero");
    alpha.direction.normalize();
    const double a_min = d.at("a_min").get<double>(), a_max = d.at("a_max").get<double>();
    if (!(a_min < a_max)) throw InvalidInput("scenario: need a_min < a_max");
    std::vector<double> f;
    if (d.contains("f")) {
      f = d.at("f").get<std::vector<double>>();
    } else {
      const double width = d.at("width").get<double>();
      const double skew = d.value("skew", 0.0);
      const int n = d.value("samples", 257);
      if (n < 5) throw InvalidInput("scenario: symmetric_graph needs at least 5 samples");
      for (int k = 0; k < n; ++k) {
        const double xi = -1.0 + 2.0 * k / (n - 1);
        const double v = (k == 0 || k == n - 1) ? 0.0 : width * std::sqrt(1.0 - xi * xi) * (1.0 + skew * xi);
        f.push_back(v);
      }
    }
    s.curve = BoundaryCurve::symmetric_graph(1, alpha, a_min, a_max, f);
    s.region = s.curve->region();
  } else if (kind == "curve") {
    namespace fs = std::filesystem;
    auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (fs::path(base_dir) / p).string(); };
    s.curve = read_boundary_curve(resolve(d.at("csv").get<std::string>()), resolve(d.at("json").get<std::string>()));
    s.region = s.curve->region();
  } else {
    throw InvalidInput("scenario: unknown domain kind '" + kind + "'");
  }
}

BoundaryConditionSpec parse_bc(const Scenario& s, const json& b) {
  const std::string kind = b.at("kind").get<std::string>();
  if (kind == "contact_angle") {
    ContactAngle c;
    c.gamma1 = b.at("gamma1").get<double>();
    c.gamma2 = b.value("gamma2", c.gamma1);
    return c;
  }
  if (kind == "fixed_boundary") {
    FixedBoundary f;
    f.height = b.value("height", 0.0);
    if (s.curve) {
      f.curves.push_back(*s.curve);
    } else if (s.disk_center) {
      const auto* disk = dynamic_cast<const DiskRegion*>(s.region.get());
      f.curves.push_back(BoundaryCurve::circle(1, *s.disk_center, disk->radius(), 256));
    } else {
      throw InvalidInput("scenario: fixed_boundary needs a graph domain");
    }
    return f;
  }
  if (kind == "curvature_flux") {
    CurvatureFlux f = CurvatureFlux::affine(b.at("a").get<double>(), b.at("b").get<double>());
    f.H0_min = b.value("H0_min", -10.0);
    f.H0_max = b.value("H0_max", 10.0);
    return f;
  }
  if (kind == "radial_flux") {
    RadialFlux r;
    r.c = b.at("c").get<double>();
    r.origin = vec2(b.value("origin", json::array({0.0, 0.0})), "bc.origin");
    return r;
  }
  if (kind == "dirichlet") {
    const double a = b.value("value", 0.0);
    const Vec2 g = vec2(b.value("gradient", json::array({0.0, 0.0})), "bc.gradient");
    return Dirichlet{[a, g](const Vec2& x) { return a + g.dot(x); }};
  }
  throw InvalidInput("scenario: unknown boundary condition kind '" + kind + "'");
}

void check_mirror_symmetric(const BoundaryCurve& c) {
  if (!c.alpha) throw InvalidInput("T2 precondition: the fixed boundary must be symmetric about a line alpha");
  const double tol = 1e-9 * c.diameter();
  const auto& V = c.vertices;
  for (const auto& v : V) {
    const Vec2 r = c.alpha->reflect(v);
    double best = INFINITY;
    for (std::size_t i = 0; i < V.size(); ++i) {
      const Vec2 a = V[i], e = V[(i + 1) % V.size()] - a;
      const double t = std::clamp((r - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
      best = std::min(best, (a + t * e - r).norm());
    }
    if (best > tol) throw InvalidInput("T2 precondition: the fixed boundary must be symmetric about a line alpha");
  }
}

void check_preconditions(const Scenario& s) {
  const std::size_t k = s.bc.index();
  if (s.id == "T1" && k != 0) throw InvalidInput("T1 precondition: the angle of contact with each plate must be a constant (contact_angle)");
  if (s.id == "T2") {
    if (k != 1) throw InvalidInput("T2 precondition: the boundary must be fixed (fixed_boundary)");
    if (s.curve) check_mirror_symmetric(*s.curve);
  }
  if (s.id == "T3" && k != 2)
    throw InvalidInput("T3 precondition: du/deta must be a nonincreasing function of the boundary mean curvature (curvature_flux)");
  if (s.id == "T4" && k != 3) throw InvalidInput("T4 precondition: du/deta = -c r with c > 0 (radial_flux)");
  try {
    validate(s.bc);
  } catch (const InvalidInput& e) {
    throw InvalidInput((s.id == "custom" ? std::string() : s.id + " precondition: ") + e.what());
  }
  if (s.mode == ScenarioMode::profile && k != 0) throw InvalidInput("scenario: profile mode supports contact_angle only");
  if (!(s.h > 0.0)) throw InvalidInput("scenario: resolution.h must be positive");
  if (s.mesh_angular < 16 || s.mesh_angular % 16) throw InvalidInput("scenario: mesh_angular must be a positive multiple of 16");
  if (s.directions < 1) throw InvalidInput("scenario: sweep.directions must be >= 1");
  if (s.profile_segments < 8) throw InvalidInput("scenario: profile_segments must be >= 8");
  s.solver.validate();
}

}  // namespace

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Scenario Scenario::from_json(const json& j, const std::string& base_dir) {
  Scenario s;
  s.base_dir = base_dir;
  try {
    s.source = j;
    s.id = j.value("id", "custom");
    if (s.id != "T1" && s.id != "T2" && s.id != "T3" && s.id != "T4" && s.id != "custom")
      throw InvalidInput("scenario: id must be one of T1, T2, T3, T4, custom");
    const std::string mode = j.value("mode", "graph");
    if (mode == "graph")
      s.mode = ScenarioMode::graph;
    else if (mode == "profile")
      s.mode = ScenarioMode::profile;
    else
      throw InvalidInput("scenario: mode must be graph or profile");
    s.seed = j.value("seed", std::uint64_t{0});
    s.H = PrescribedH::from_json(j.at("H"));

    if (j.contains("resolution")) {
      const json& r = j["resolution"];
      s.h = r.value("h", s.h);
      s.mesh_angular = r.value("mesh_angular", s.mesh_angular);
      s.mesh_radial = r.value("mesh_radial", s.mesh_radial);
      s.wall_rows = r.value("wall_rows", s.wall_rows);
      s.profile_samples = r.value("profile_samples", s.profile_samples);
      s.profile_segments = r.value("profile_segments", s.profile_segments);
    }
    s.solver.profile_samples = s.profile_samples;
    if (j.contains("solver")) {
      const json& r = j["solver"];
      s.solver.newton_tol = r.value("newton_tol", s.solver.newton_tol);
      s.solver.max_iterations = r.value("max_iterations", s.solver.max_iterations);
      s.solver.continuation_steps = r.value("continuation_steps", s.solver.continuation_steps);
      const std::string damping = r.value("damping", "backtracking");
      if (damping != "backtracking" && damping != "none") throw InvalidInput("scenario: damping must be backtracking or none");
      s.solver.damping = damping == "none" ? Damping::none : Damping::backtracking;
      if (r.contains("bracket")) {
        const Vec2 b = vec2(r["bracket"], "solver.bracket");
        s.solver.bracket_lo = b.x();
        s.solver.bracket_hi = b.y();
      }
      if (r.contains("mean_height")) s.solver.mean_height = r["mean_height"].get<double>();
    }
    if (j.contains("sweep")) {
      const json& r = j["sweep"];
      s.directions = r.value("directions", s.directions);
      s.contact_tol = r.value("contact_tol", s.contact_tol);
      s.jitter = r.value("jitter", s.jitter);
    }
    if (j.contains("tolerances")) {
      const json& r = j["tolerances"];
      s.symmetry_factor = r.value("symmetry_factor", s.symmetry_factor);
      s.axis_residual_tol = r.value("axis_residual", s.axis_residual_tol);
      s.location_factor = r.value("location_factor", s.location_factor);
      s.flux_factor = r.value("flux_factor", s.flux_factor);
    }
    if (j.contains("perturbation") && !j["perturbation"].is_null()) {
      Perturbation p;
      p.amplitude = j["perturbation"].value("amplitude", p.amplitude);
      p.sigma_factor = j["perturbation"].value("sigma_factor", p.sigma_factor);
      s.perturbation = p;
    }
    const std::string expect = j.value("expect", "symmetric");
    if (expect != "symmetric" && expect != "asymmetric") throw InvalidInput("scenario: expect must be symmetric or asymmetric");
    s.expect_symmetric = expect == "symmetric";
    s.detection_threshold = j.value("detection_threshold", s.detection_threshold);

    if (s.mode == ScenarioMode::profile) {
      const json& sl = j.at("slab");
      s.slab.axis_normal = vec3(sl.value("axis_normal", json::array({0.0, 0.0, 1.0})), "slab.axis_normal");
      s.slab.offset_lo = sl.at("offset_lo").get<double>();
      s.slab.offset_hi = sl.at("offset_hi").get<double>();
      s.slab.validate();
    } else {
      parse_domain(s, j.at("domain"), base_dir);
    }
    s.bc = parse_bc(s, j.at("bc"));
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("scenario: ") + e.what());
  }
  check_preconditions(s);
  return s;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot read scenario " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw InvalidInput("scenario " + path + ": " + e.what());
  }
  const std::string dir = std::filesystem::path(path).parent_path().string();
  return from_json(j, dir.empty() ? "." : dir);
}

Scenario Scenario::with_overrides(std::optional<std::uint64_t> seed_override, std::optional<double> h_override) const {
  json j = source;
  if (seed_override) j["seed"] = *seed_override;
  if (h_override) j["resolution"]["h"] = *h_override;
  return from_json(j, base_dir);
}

std::uint64_t Scenario::config_hash() const {
  const std::string text = source.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace slabsym
