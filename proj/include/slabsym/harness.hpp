#pragma once

#include "slabsym/mesh.hpp"
#include "slabsym/moving_plane.hpp"
#include "slabsym/profile.hpp"
#include "slabsym/scenario.hpp"
#include "slabsym/solver.hpp"
#include "slabsym/touching.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace slabsym {

struct Criterion {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string comparison;  // "<=" or ">="
};

/// Linearisation and touching checks of a graph solution against its mirror
/// image about the lattice line nearest to a detected symmetry plane.
struct SpotCheck {
  double mirror_x = 0.0;           // plate coordinate of the mirror line x = const
  double max_abs_w = 0.0;          // w = u - mirrored u
  double identity_residual = 0.0;  // |L(w) - [F(u) - F(ubar)]| over interior nodes
  double ellipticity_k = 0.0;
  double min_eigenvalue = 0.0;     // smallest eigenvalue of the assembled A^ij
  TouchingVerdict touching;

  nlohmann::json to_json() const;
};

struct SolveOutcome {
  std::optional<ScalarField> field;     // graph mode
  std::optional<ProfileCurve> profile;  // profile mode
  SolveDiagnostics diagnostics;
};

struct VerificationReport {
  std::string scenario_id = "custom";
  std::string status = "error";  // pass, fail or error
  std::string error_stage;
  std::string error_message;
  std::optional<SolveDiagnostics> solver;
  std::optional<double> shooting_residual;
  std::optional<SymmetryReport> symmetry;
  std::optional<SpotCheck> spot_check;
  std::vector<Criterion> criteria;
  std::string config_hash;
  double resolution = 0.0;
  std::uint64_t seed = 0;

  bool passed() const { return status == "pass"; }
  nlohmann::json to_json() const;
};

struct RunArtifacts {
  SolveOutcome solve;
  std::optional<SurfaceMesh> mesh;
};

SolveOutcome solve_scenario(const Scenario& s);

/// Body mesh of a solution (with the configured perturbation applied).
SurfaceMesh scenario_mesh(const Scenario& s, const SolveOutcome& solved);

/// Sweep directions of a scenario: the evenly spaced fan (optionally rotated
/// by a seeded jitter) plus the normal of alpha when the domain has one.
std::vector<Vec3> scenario_directions(const Scenario& s, const Slab& slab);

SpotCheck reflection_spot_check(const Scenario& s, const ScalarField& u, double plane_x);

/// Full pipeline. Stage failures are caught and reported with status "error".
VerificationReport run_scenario(const Scenario& s, RunArtifacts* artifacts = nullptr);

/// Writes report.json plus mesh.obj / mesh_loops.json, field.csv or
/// profile.csv and sweep_<k>.csv for whatever the run produced.
void export_artifacts(const VerificationReport& report, const RunArtifacts& artifacts, const std::string& directory);

void write_json(const nlohmann::json& j, const std::string& path);

}  // namespace slabsym
