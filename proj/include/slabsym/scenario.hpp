#pragma once

#include "slabsym/boundary_conditions.hpp"
#include "slabsym/boundary_curve.hpp"
#include "slabsym/geometry.hpp"
#include "slabsym/prescribed_h.hpp"
#include "slabsym/region.hpp"
#include "slabsym/solver.hpp"

#include <json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace slabsym {

enum class ScenarioMode { graph, profile };

struct Perturbation {
  double amplitude = 0.05;
  double sigma_factor = 0.15;  // Gaussian width as a fraction of the mesh diameter
};

/// One verification run: geometry, equation, boundary data, resolution and
/// tolerances. See docs/scenario_schema.md for the file format.
struct Scenario {
  std::string id = "custom";  // T1, T2, T3, T4 or custom
  ScenarioMode mode = ScenarioMode::graph;
  Slab slab;                   // profile mode
  PrescribedH H;
  std::shared_ptr<const Region> region;      // graph mode
  std::optional<BoundaryCurve> curve;        // when the domain is a polygonal curve
  std::optional<Vec2> disk_center;           // when the domain is a disk
  BoundaryConditionSpec bc;

  double h = 1.0 / 64;
  int mesh_angular = 256;
  int mesh_radial = 0;
  int wall_rows = 8;
  int profile_samples = 129;
  int profile_segments = 64;
  SolverSettings solver;

  int directions = 8;
  double contact_tol = 0.0;
  double jitter = 0.0;  // random rotation of the direction fan, radians (seeded)

  double symmetry_factor = 10.0;  // deviation tolerance = factor * h^2
  double axis_residual_tol = 1e-5;
  double location_factor = 2.0;   // plane/axis location tolerance = factor * h
  double flux_factor = 10.0;      // boundary residual tolerance = factor * h^2

  std::optional<Perturbation> perturbation;
  bool expect_symmetric = true;
  double detection_threshold = 0.02;

  std::uint64_t seed = 0;
  nlohmann::json source;  // input document with overrides applied
  std::string base_dir = ".";

  /// Parses and checks every theorem precondition before returning
  /// (InvalidInput names the violated one). Relative file paths in the
  /// domain are resolved against base_dir.
  static Scenario from_json(const nlohmann::json& j, const std::string& base_dir = ".");
  static Scenario load(const std::string& path);

  /// Seed and resolution overrides, re-validated.
  Scenario with_overrides(std::optional<std::uint64_t> seed, std::optional<double> h) const;

  double symmetry_tol() const { return symmetry_factor * h * h; }
  double location_tol() const { return location_factor * h; }

  /// FNV-1a 64 of the canonical source dump.
  std::uint64_t config_hash() const;
};

std::string hex64(std::uint64_t v);

}  // namespace slabsym
