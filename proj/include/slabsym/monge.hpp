#pragma once

#include "slabsym/mesh.hpp"

namespace slabsym {

/// Local quadratic graph  zeta = a xi^2 + b xi eta + c eta^2 + d xi + e eta + f
/// over the tangent plane at a mesh vertex, zeta measured along the inward
/// normal. Principal curvatures are therefore positive on convex bodies.
struct MongePatch {
  Vec3 origin;
  Vec3 tangent1, tangent2;
  Vec3 outward_normal;
  double a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;
  double residual = 0.0;  // RMS fit residual
  bool low_confidence = false;
  Vec2 principal_curvatures = Vec2::Zero();  // ascending
  double mean_curvature = 0.0;               // average of the principal curvatures
  int neighbors = 0;
};

struct MongeOptions {
  double radius = 0.1;
  /// RMS residual above residual_ratio * radius flags the fit as low-confidence.
  double residual_ratio = 1e-3;
  int refinements = 2;
};

MongePatch monge_patch(const SurfaceMesh& mesh, int vertex, const MongeOptions& opt);

}  // namespace slabsym
