#include "slabsym/errors.hpp"
#include "slabsym/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>

using namespace slabsym;

namespace {

constexpr int kPass = 0, kFail = 1, kError = 2;

Scenario load_scenario(const std::string& path, std::optional<std::uint64_t> seed, std::optional<double> h) {
  Scenario s = Scenario::load(path);
  if (seed || h) s = s.with_overrides(seed, h);
  return s;
}

void print_criteria(const VerificationReport& r) {
  std::cout << r.scenario_id << ": " << r.status;
  if (r.status == "error") std::cout << " at " << r.error_stage << ": " << r.error_message;
  std::cout << "\n";
  for (const auto& c : r.criteria)
    std::cout << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << " = " << c.value << " (" << c.comparison << " "
              << c.threshold << ")\n";
}

int status_code(const VerificationReport& r) {
  if (r.status == "error") return kError;
  return r.passed() ? kPass : kFail;
}

// spot check about the vertical line x = mirror through the solved field
SpotCheck spot_check(const Scenario& s, std::optional<double> mirror_x) {
  if (s.mode != ScenarioMode::graph) throw InvalidInput("spot checks need a graph-mode scenario");
  const SolveOutcome solved = solve_scenario(s);
  return reflection_spot_check(s, *solved.field, mirror_x.value_or(s.region->center().x()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetry verification for prescribed mean curvature surfaces in a slab"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, out_dir, mesh_path, loops_path, artifacts_dir;
  std::optional<std::uint64_t> seed;
  std::optional<double> resolution, mirror_x, contact_tol, symmetry_tol;
  int directions = 8;

  auto scenario_options = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario_path, "scenario JSON")->required()->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "seed for direction jitter (default from the scenario, else 0)");
    sub->add_option("--resolution", resolution, "grid spacing h, overrides the scenario")->check(CLI::PositiveNumber);
  };

  CLI::App* verify = app.add_subcommand("verify", "solve, sweep and check every criterion of a scenario");
  scenario_options(verify);
  verify->add_option("--out", out_path, "report JSON")->required();
  verify->add_option("--artifacts", artifacts_dir, "also write meshes, fields and sweep profiles here");

  CLI::App* solve = app.add_subcommand("solve", "solve a scenario and write the field or profile");
  scenario_options(solve);
  solve->add_option("--out-dir", out_dir, "output directory")->required();

  CLI::App* sweep = app.add_subcommand("sweep", "moving-plane sweeps over a mesh file");
  sweep->add_option("--mesh", mesh_path, "OBJ mesh")->required()->check(CLI::ExistingFile);
  sweep->add_option("--loops", loops_path, "boundary-loop JSON sidecar")->required()->check(CLI::ExistingFile);
  sweep->add_option("--directions", directions, "equally spaced directions")->check(CLI::PositiveNumber);
  sweep->add_option("--contact-tol", contact_tol, "contact tolerance (default 2 max_edge^2)");
  sweep->add_option("--symmetry-tol", symmetry_tol, "symmetry tolerance (default 10 max_edge^2)");
  sweep->add_option("--out", out_path, "report JSON")->required();
  sweep->add_option("--profiles", out_dir, "write deviation-vs-t CSVs here");

  CLI::App* linearize = app.add_subcommand("linearize", "difference operator of a solution and its mirror image");
  scenario_options(linearize);
  linearize->add_option("--mirror-x", mirror_x, "mirror line x = const (default region center)");
  linearize->add_option("--out", out_path, "JSON output")->required();

  CLI::App* touching = app.add_subcommand("touching", "touching-principle check of a solution against its mirror image");
  scenario_options(touching);
  touching->add_option("--mirror-x", mirror_x, "mirror line x = const (default region center)");
  touching->add_option("--out", out_path, "JSON output")->required();

  CLI::App* exporter = app.add_subcommand("export", "run a scenario and write all artifacts");
  scenario_options(exporter);
  exporter->add_option("--dir", out_dir, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kPass : kError;
  }

  try {
    if (verify->parsed()) {
      const Scenario s = load_scenario(scenario_path, seed, resolution);
      RunArtifacts art;
      const VerificationReport r = run_scenario(s, &art);
      write_json(r.to_json(), out_path);
      if (!artifacts_dir.empty()) export_artifacts(r, art, artifacts_dir);
      print_criteria(r);
      return status_code(r);
    }
    if (exporter->parsed()) {
      const Scenario s = load_scenario(scenario_path, seed, resolution);
      RunArtifacts art;
      const VerificationReport r = run_scenario(s, &art);
      export_artifacts(r, art, out_dir);
      print_criteria(r);
      return status_code(r);
    }
    if (solve->parsed()) {
      const Scenario s = load_scenario(scenario_path, seed, resolution);
      const SolveOutcome o = solve_scenario(s);
      std::filesystem::create_directories(out_dir);
      const std::filesystem::path dir(out_dir);
      nlohmann::json j = {{"scenario_id", s.id}, {"config_hash", hex64(s.config_hash())}};
      if (o.field) {
        write_field_csv(*o.field, (dir / "field.csv").string());
        j["solver"] = o.diagnostics.to_json();
      }
      if (o.profile) {
        write_profile_csv(*o.profile, (dir / "profile.csv").string());
        j["shooting_residual"] = o.profile->shooting_residual;
      }
      write_json(j, (dir / "solve.json").string());
      std::cout << "solved " << s.id << " -> " << out_dir << "\n";
      return kPass;
    }
    if (sweep->parsed()) {
      const SurfaceMesh mesh = read_obj(mesh_path, loops_path);
      const double e = mesh.max_edge_length();
      SweepOptions opt;
      opt.contact_tol = contact_tol.value_or(0.0);
      const MeshIndex index(mesh);
      const auto results = sweep_all(index, sweep_directions(mesh.slab, directions), opt);
      const SymmetryReport rep = extract_symmetry_axis(results, mesh.slab, symmetry_tol.value_or(10.0 * e * e));
      write_json(rep.to_json(), out_path);
      if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        for (std::size_t k = 0; k < results.size(); ++k)
          write_sweep_profile_csv(results[k], (std::filesystem::path(out_dir) / ("sweep_" + std::to_string(k) + ".csv")).string());
      }
      std::cout << (rep.symmetric ? "symmetric" : "asymmetric") << ", max deviation " << rep.max_deviation
                << (rep.axis ? ", axis found" : ", no axis") << "\n";
      return rep.symmetric ? kPass : kFail;
    }
    if (linearize->parsed() || touching->parsed()) {
      const Scenario s = load_scenario(scenario_path, seed, resolution);
      const SpotCheck sc = spot_check(s, mirror_x);
      write_json(sc.to_json(), out_path);
      std::cout << "identity residual " << sc.identity_residual << ", k " << sc.ellipticity_k << ", min eigenvalue "
                << sc.min_eigenvalue << ", touching " << to_string(sc.touching.conclusion) << "\n";
      if (touching->parsed()) return sc.touching.conclusion == Conclusion::violated ? kFail : kPass;
      return kPass;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
  return kError;
}
