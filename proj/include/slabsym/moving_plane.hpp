#pragma once

#include "slabsym/mesh.hpp"
#include "slabsym/mesh_index.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slabsym {

enum class TouchClass { interior, boundary, degenerate_simultaneous };

const char* to_string(TouchClass c);

struct ReflectionComparison {
  bool empty_cap = false;
  double deviation = 0.0;  // max distance from reflected cap vertices to M
  int witness = -1;        // cap vertex attaining it
  int compared = 0;
};

/// Reflects the vertices with (p - plane.point) . normal < 0 and measures
/// their distance to M. Vertices off the plates whose foot falls on a
/// boundary-loop edge are skipped. OrientationError if the plane is not
/// orthogonal to the plates.
ReflectionComparison reflect_and_compare(const MeshIndex& index, const Plane& plane);
ReflectionComparison reflect_and_compare(const SurfaceMesh& mesh, const Plane& plane);

struct SweepOptions {
  int scan_steps = 64;
  double contact_tol = 0.0;       // 0 selects 2 * max_edge_length^2
  double bisection_rel = 1e-8;    // of the extent along the direction
  bool refine_degenerate = true;  // least-squares plane for simultaneous touches
};

struct SweepResult {
  Vec3 direction = Vec3::UnitX();
  double t_star = 0.0;  // plane = {p : p . direction = t_star}
  double t_min = 0.0, t_max = 0.0;
  TouchClass touch_class = TouchClass::interior;
  std::vector<Vec3> touch_points;  // reflected cap vertices leaving the body first
  bool normals_agree = true;       // dot > 0.9 at the main touch point
  Plane symmetry_plane;
  double deviation = 0.0;
  bool empty_cap = false;
  double contact_tol = 0.0;
  // (t, max distance by which the reflected cap leaves the body) at the scan points
  std::vector<std::pair<double, double>> profile;

  nlohmann::json to_json() const;
};

/// Pushes the plane {p . d = t} from the first tangent position along d and
/// stops at the first t where the reflected cap leaves the body by more than
/// contact_tol, refined by bisection.
SweepResult first_touch(const MeshIndex& index, const Vec3& direction, const SweepOptions& opt = {});

/// first_touch plus the reflection comparison at the detected plane.
SweepResult sweep_direction(const MeshIndex& index, const Vec3& direction, const SweepOptions& opt = {});
SweepResult sweep_direction(const SurfaceMesh& mesh, const Vec3& direction, const SweepOptions& opt = {});

/// `count` directions in the plates at angles pi k / count from e1 of the plate frame.
std::vector<Vec3> sweep_directions(const Slab& slab, int count);

/// Sweeps every direction (concurrently); results in input order.
std::vector<SweepResult> sweep_all(const MeshIndex& index, const std::vector<Vec3>& directions,
                                   const SweepOptions& opt = {});

struct SymmetryAxis {
  Vec3 point = Vec3::Zero();  // on plate 1
  Vec3 direction = Vec3::UnitZ();
};

struct SymmetryReport {
  std::vector<SweepResult> sweeps;
  std::optional<SymmetryAxis> axis;
  double axis_residual = 0.0;  // max distance from the axis to a contributing plane
  int planes_used = 0;
  double max_deviation = 0.0;
  double symmetry_tol = 0.0;
  bool symmetric = false;
  int witness_direction = -1;  // sweep with the largest deviation

  nlohmann::json to_json() const;
};

/// Least-squares line orthogonal to the plates through the planes of the
/// sweeps with deviation <= symmetry_tol; no axis with fewer than two
/// independent such planes.
SymmetryReport extract_symmetry_axis(const std::vector<SweepResult>& results, const Slab& slab, double symmetry_tol);

/// "t,deviation" rows of a sweep profile.
void write_sweep_profile_csv(const SweepResult& r, const std::string& path);

}  // namespace slabsym
