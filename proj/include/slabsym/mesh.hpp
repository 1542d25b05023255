#pragma once

#include "slabsym/geometry.hpp"

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace slabsym {

struct BoundaryLoop {
  std::vector<int> vertices;  // ordered cycle
  int plate = 1;              // 1 or 2
};

/// Triangulated hypersurface M in a slab. Face winding is consistent and
/// face normals point out of the enclosed body.
struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> faces;
  std::vector<BoundaryLoop> loops;
  Slab slab;

  Vec3 face_normal(int f) const;  // unit
  double face_area(int f) const;
  /// Area-weighted unit vertex normals.
  std::vector<Vec3> vertex_normals() const;
  double diameter() const;
  double max_edge_length() const;
  double mean_edge_length() const;
  /// Per-vertex plate id (0 when the vertex is not on a boundary loop).
  std::vector<int> vertex_plates() const;
};

struct MeshCheck {
  bool manifold = true;       // interior edges 2 faces, boundary edges 1
  bool oriented = true;       // shared edges traversed in opposite directions
  bool loops_on_plates = true;
  bool inside_slab = true;
  std::string message;
  bool ok() const { return manifold && oriented && loops_on_plates && inside_slab; }
};

MeshCheck check_mesh(const SurfaceMesh& mesh);
/// Throws InvalidInput with the first failure message.
void validate_mesh(const SurfaceMesh& mesh);

/// Boundary edges (a, b) as they appear in face winding.
std::vector<std::array<int, 2>> boundary_edges(const SurfaceMesh& mesh);

/// Triangles closing M into the boundary of the body: a fan over each
/// boundary loop (the plate pieces D1, D2).
std::vector<std::array<int, 3>> plate_caps(const SurfaceMesh& mesh, std::vector<Vec3>& extra_vertices);

/// Signed enclosed volume of M closed with its plate caps (positive when
/// face normals point outward).
double enclosed_volume(const SurfaceMesh& mesh);

// ---- construction helpers -------------------------------------------------

/// Ring-structured tube: `rings` x `segments` grid of points, ring index
/// increasing along the slab axis, segment index counterclockwise about it.
/// Ring 0 is tagged to plate 1 and the last ring to plate 2 when
/// `tag_plates` is set.
SurfaceMesh tube_mesh(int rings, int segments, const std::function<Vec3(int ring, int seg)>& point,
                      const Slab& slab, bool tag_plates);

/// Closed UV sphere.
SurfaceMesh sphere_mesh(const Vec3& center, double radius, int segments, int stacks);

/// Closed ellipsoid with semi-axes `axes` aligned with x, y, z.
SurfaceMesh ellipsoid_mesh(const Vec3& center, const Vec3& axes, int segments, int stacks);

/// Height graph z = f(x, y) over the square [-half, half]^2, `n` cells per side.
SurfaceMesh graph_patch_mesh(const std::function<double(double, double)>& f, double half, int n);

// ---- I/O ------------------------------------------------------------------

void write_obj(const SurfaceMesh& mesh, const std::string& path);
/// Sidecar JSON: slab and boundary-loop plate tags.
void write_loops_json(const SurfaceMesh& mesh, const std::string& path);
SurfaceMesh read_obj(const std::string& obj_path, const std::string& loops_json_path);

}  // namespace slabsym
