#include "slabsym/harness.hpp"

#include "slabsym/body.hpp"
#include "slabsym/errors.hpp"
#include "slabsym/linearization.hpp"
#include "slabsym/mean_curvature.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

namespace slabsym {

namespace {

using nlohmann::json;


double residual_F(const ScalarField& u, const PrescribedH& H, int k) {
  const NodeDifferentials d = differentials(u, k);
  return mc_from_derivatives(d.gradient, d.hessian) - 2.0 * H.eval(u.grid->position(k), u.values[k], d.gradient).H;
}

void add(std::vector<Criterion>& out, const std::string& name, double value, double threshold, bool at_most = true) {
  Criterion c;
  c.name = name;
  c.value = value;
  c.threshold = threshold;
  c.comparison = at_most ? "<=" : ">=";
  c.passed = std::isfinite(value) && (at_most ? value <= threshold : value >= threshold);
  out.push_back(c);
}

}  // namespace

json SpotCheck::to_json() const {
  return {{"mirror_x", mirror_x},
          {"max_abs_w", max_abs_w},
          {"identity_residual", identity_residual},
          {"ellipticity_k", ellipticity_k},
          {"min_eigenvalue", min_eigenvalue},
          {"touching", touching.to_json()}};
}

json VerificationReport::to_json() const {
  json crit = json::array();
  for (const auto& c : criteria)
    crit.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"threshold", c.threshold},
                    {"comparison", c.comparison}});
  json j = {{"scenario_id", scenario_id},
            {"status", status},
            {"criteria", crit},
            {"provenance", {{"config_hash", config_hash}, {"resolution", resolution}, {"seed", seed}}}};
  j["error"] = status == "error" ? json{{"stage", error_stage}, {"message", error_message}} : json(nullptr);
  j["solver"] = solver ? solver->to_json() : json(nullptr);
  j["shooting_residual"] = shooting_residual ? json(*shooting_residual) : json(nullptr);
  j["symmetry"] = symmetry ? symmetry->to_json() : json(nullptr);
  j["spot_check"] = spot_check ? spot_check->to_json() : json(nullptr);
  return j;
}

SolveOutcome solve_scenario(const Scenario& s) {
  SolveOutcome out;
  if (s.mode == ScenarioMode::profile) {
    const auto& ca = std::get<ContactAngle>(s.bc);
    out.profile = solve_axisymmetric_profile(s.slab, s.H, ca.gamma1, ca.gamma2, s.solver);
    out.diagnostics.converged = true;
    return out;
  }
  const auto grid = DomainGrid::build(s.region, s.h, s.region->center());
  if (const auto* d = std::get_if<Dirichlet>(&s.bc)) {
    out.field = solve_graph_dirichlet(grid, s.H, d->g, s.solver, &out.diagnostics);
  } else if (const auto* f = std::get_if<FixedBoundary>(&s.bc)) {
    const double height = f->height;
    out.field = solve_graph_dirichlet(grid, s.H, [height](const Vec2&) { return height; }, s.solver, &out.diagnostics);
  } else {
    out.field = solve_graph_flux(grid, s.H, s.bc, s.solver, &out.diagnostics);
  }
  return out;
}

SurfaceMesh scenario_mesh(const Scenario& s, const SolveOutcome& solved) {
  SurfaceMesh mesh;
  Vec3 target;
  if (solved.field) {
    GraphBodyOptions opt;
    opt.angular = s.mesh_angular;
    opt.radial = s.mesh_radial;
    opt.wall_rows = s.wall_rows;
    mesh = graph_body_mesh(*solved.field, opt);
    const Vec2 c = s.region->center();
    const Vec2 x = c + 0.5 * s.region->radial_extent(0.0) * Vec2::UnitX();
    target = Vec3(x.x(), x.y(), interpolate(*solved.field, x));
  } else if (solved.profile) {
    mesh = revolve_profile(*solved.profile, s.slab, s.profile_segments);
    const auto& p = *solved.profile;
    const std::size_t mid = p.size() / 2;
    const auto [e1, e2] = s.slab.plate_frame();
    target = p.x[mid] * e1 + (s.slab.offset_lo + p.z[mid]) * s.slab.axis_normal.normalized();
  } else {
    throw InvalidInput("scenario mesh: nothing was solved");
  }
  if (s.perturbation) {
    const Vec3 at = mesh.vertices[nearest_vertex(mesh, target)];
    mesh = perturb_mesh(mesh, at, s.perturbation->amplitude, s.perturbation->sigma_factor * mesh.diameter());
  }
  return mesh;
}

std::vector<Vec3> scenario_directions(const Scenario& s, const Slab& slab) {
  std::vector<Vec3> dirs = sweep_directions(slab, s.directions);
  const Vec3 axis = slab.axis_normal.normalized();
  if (s.jitter > 0.0) {
    std::mt19937_64 rng(s.seed);
    std::uniform_real_distribution<double> U(-s.jitter, s.jitter);
    const Eigen::AngleAxisd rot(U(rng), axis);
    for (auto& d : dirs) d = rot * d;
  }
  if (s.curve && s.curve->alpha) {
    const auto [e1, e2] = slab.plate_frame();
    const Vec2 n = s.curve->alpha->normal();
    const Vec3 d = (n.x() * e1 + n.y() * e2).normalized();
    bool present = false;
    for (const auto& q : dirs) present = present || std::abs(std::abs(q.dot(d)) - 1.0) < 1e-12;
    if (!present) dirs.push_back(d);
  }
  return dirs;
}

SpotCheck reflection_spot_check(const Scenario& s, const ScalarField& u, double plane_x) {
  const DomainGrid& g = *u.grid;
  const double h = g.spacing();
  const long m2 = std::lround(2.0 * (plane_x - g.origin().x()) / h);
  SpotCheck sc;
  sc.mirror_x = g.origin().x() + 0.5 * h * m2;
  ScalarField ubar = u;
  std::vector<char> exact(g.active_count(), 0);
  for (int k = 0; k < g.active_count(); ++k) {
    const auto& ij = g.lattice(k);
    const int mirror = g.active_index(static_cast<int>(m2 - ij[0]), ij[1]);
    if (mirror >= 0) {
      ubar.values[k] = u.values[mirror];
      exact[k] = 1;
      continue;
    }
    const Vec2 p = g.position(k);
    try {
      ubar.values[k] = interpolate(u, Vec2(2.0 * sc.mirror_x - p.x(), p.y()));
    } catch (const Error&) {
      ubar.values[k] = u.values[k];
    }
  }
  ScalarField w = u;
  for (int k = 0; k < g.active_count(); ++k) w.values[k] = u.values[k] - ubar.values[k];
  const EllipticOperatorField L = assemble_difference_operator(u, ubar, s.H);
  const auto Lw = L.apply(w);
  const auto& interior = g.interior_nodes();
  sc.min_eigenvalue = INFINITY;
  for (std::size_t m = 0; m < interior.size(); ++m) {
    const int k = interior[m];
    bool mirrored = true;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) mirrored = mirrored && exact[g.neighbor(k, di, dj)];
    if (mirrored)
      sc.identity_residual =
          std::max(sc.identity_residual, std::abs(Lw[m] - (residual_F(u, s.H, k) - residual_F(ubar, s.H, k))));
    const Eigen::SelfAdjointEigenSolver<Mat2> es(L.nodes[m].A);
    sc.min_eigenvalue = std::min(sc.min_eigenvalue, es.eigenvalues()(0));
  }
  sc.ellipticity_k = ellipticity_constant(u, ubar);
  int x0 = interior.front();
  for (int k : interior) {
    sc.max_abs_w = std::max(sc.max_abs_w, std::abs(w.values[k]));
    if (w.values[k] > w.values[x0]) x0 = k;
  }
  sc.touching = check_interior_touching(L, w, x0, TouchingTolerances::for_spacing(h));
  return sc;
}

VerificationReport run_scenario(const Scenario& s, RunArtifacts* artifacts) {
  VerificationReport rep;
  rep.scenario_id = s.id;
  rep.config_hash = hex64(s.config_hash());
  rep.resolution = s.h;
  rep.seed = s.seed;
  RunArtifacts local;
  RunArtifacts& art = artifacts ? *artifacts : local;
  std::string stage = "solve";
  try {
    art.solve = solve_scenario(s);
    if (art.solve.field) rep.solver = art.solve.diagnostics;
    if (art.solve.profile) rep.shooting_residual = art.solve.profile->shooting_residual;

    stage = "mesh";
    art.mesh = scenario_mesh(s, art.solve);
    const SurfaceMesh& mesh = *art.mesh;

    stage = "sweep";
    const MeshIndex index(mesh);
    SweepOptions opt;
    opt.contact_tol = s.contact_tol;
    const auto dirs = scenario_directions(s, mesh.slab);
    const auto sweeps = sweep_all(index, dirs, opt);

    stage = "axis";
    rep.symmetry = extract_symmetry_axis(sweeps, mesh.slab, s.symmetry_tol());
    const SymmetryReport& sym = *rep.symmetry;

    if (art.solve.field) {
      stage = "spot_check";
      // the sweep along e1 of the plate frame gives the mirror line x = t*
      std::size_t best = 0;
      for (std::size_t k = 1; k < sweeps.size(); ++k)
        if (std::abs(sweeps[k].direction.x()) > std::abs(sweeps[best].direction.x())) best = k;
      const double plane_x = sweeps[best].t_star * (sweeps[best].direction.x() > 0 ? 1.0 : -1.0);
      rep.spot_check = reflection_spot_check(s, *art.solve.field, plane_x);
    }

    stage = "criteria";
    auto& C = rep.criteria;
    if (art.solve.field) {
      add(C, "solver_residual", rep.solver->interior_residual, s.solver.newton_tol);
      if (s.bc.index() == 0 || s.bc.index() == 2 || s.bc.index() == 3)
        add(C, "boundary_flux_residual", rep.solver->boundary_residual, s.flux_factor * s.h * s.h);
    } else {
      add(C, "shooting_residual", std::abs(*rep.shooting_residual), 1e-8);
    }
    if (!s.expect_symmetric) {
      add(C, "asymmetry_detected", sym.symmetric ? 0.0 : sym.max_deviation, s.detection_threshold, false);
    } else if (s.id == "T2" && s.curve && s.curve->alpha) {
      const auto [e1, e2] = mesh.slab.plate_frame();
      const Vec2 n = s.curve->alpha->normal();
      const Vec3 d = (n.x() * e1 + n.y() * e2).normalized();
      const SweepResult* r = nullptr;
      for (const auto& sw : sweeps)
        if (std::abs(std::abs(sw.direction.dot(d)) - 1.0) < 1e-12) r = &sw;
      const double alpha_offset = n.dot(s.curve->alpha->point) * (r->direction.dot(d) > 0 ? 1.0 : -1.0);
      add(C, "alpha_plane_deviation", r->empty_cap ? INFINITY : r->deviation, s.symmetry_tol());
      add(C, "alpha_plane_offset", std::abs(r->t_star - alpha_offset), s.location_tol());
    } else {
      add(C, "symmetry_deviation", sym.max_deviation, s.symmetry_tol());
      add(C, "axis_found", sym.axis ? 1.0 : 0.0, 1.0, false);
      add(C, "axis_residual", sym.axis ? sym.axis_residual : INFINITY, s.axis_residual_tol);
      auto axis_distance = [&](const Vec2& p) {
        if (!sym.axis) return static_cast<double>(INFINITY);
        const auto [e1, e2] = mesh.slab.plate_frame();
        const Vec2 a(sym.axis->point.dot(e1), sym.axis->point.dot(e2));
        return (a - p).norm();
      };
      if (const auto* rf = std::get_if<RadialFlux>(&s.bc)) add(C, "axis_through_origin", axis_distance(rf->origin), s.location_tol());
      if (s.id == "T2" && s.disk_center) add(C, "axis_at_center", axis_distance(*s.disk_center), s.location_tol());
      if (s.mode == ScenarioMode::profile) add(C, "axis_at_center", axis_distance(Vec2::Zero()), s.location_tol());
    }
    if (rep.spot_check && s.expect_symmetric && !s.perturbation) {
      const SpotCheck& sc = *rep.spot_check;
      add(C, "linearization_identity", sc.identity_residual, 1e-6);
      add(C, "ellipticity_bound", sc.ellipticity_k - sc.min_eigenvalue, 1e-12);
      add(C, "touching_conclusion", sc.touching.conclusion == Conclusion::holds ? 1.0 : 0.0, 1.0, false);
    }
    bool ok = true;
    for (const auto& c : C) ok = ok && c.passed;
    rep.status = ok ? "pass" : "fail";
  } catch (const std::exception& e) {
    rep.status = "error";
    rep.error_stage = stage;
    rep.error_message = e.what();
  }
  return rep;
}

void write_json(const json& j, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot write " + path);
  os << j.dump(2) << '\n';
  if (!os) throw IoError("write failed for " + path);
}

void export_artifacts(const VerificationReport& report, const RunArtifacts& artifacts, const std::string& directory) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec || !fs::is_directory(directory)) throw IoError("cannot create directory " + directory);
  const fs::path dir(directory);
  write_json(report.to_json(), (dir / "report.json").string());
  if (artifacts.mesh) {
    write_obj(*artifacts.mesh, (dir / "mesh.obj").string());
    write_loops_json(*artifacts.mesh, (dir / "mesh_loops.json").string());
  }
  if (artifacts.solve.field) write_field_csv(*artifacts.solve.field, (dir / "field.csv").string());
  if (artifacts.solve.profile) write_profile_csv(*artifacts.solve.profile, (dir / "profile.csv").string());
  if (report.symmetry)
    for (std::size_t k = 0; k < report.symmetry->sweeps.size(); ++k)
      write_sweep_profile_csv(report.symmetry->sweeps[k], (dir / ("sweep_" + std::to_string(k) + ".csv")).string());
}

}  // namespace slabsym
