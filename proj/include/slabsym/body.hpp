#pragma once

#include "slabsym/grid.hpp"
#include "slabsym/mesh.hpp"

namespace slabsym {

enum class WallSide { down, up, automatic };

struct GraphBodyOptions {
  int angular = 256;       // multiple of 16 keeps the sampling mirror-exact about lattice-aligned lines
  int radial = 0;          // rings on the graph; 0 picks about angular / (2 pi)
  int wall_rows = 8;
  double bottom_margin = 0.1;  // plate 1 sits this fraction of the region diameter below min u
  double top_margin = 0.1;     // plate 2 above max u
  WallSide wall = WallSide::automatic;  // automatic: up when the rim sits above the mean of u
};

/// Closed-up body for a graph solution: the graph resampled on a polar grid
/// about the region center (the region must be star-shaped about it), joined
/// by a vertical wall down to plate 1 (the body lies below the graph) or up to
/// plate 2 (above it). The slab axis is e3.
SurfaceMesh graph_body_mesh(const ScalarField& u, const GraphBodyOptions& opt = {});

/// Moves every vertex not on a boundary loop along its normal by
/// amplitude * exp(-|p - at|^2 / (2 sigma^2)).
SurfaceMesh perturb_mesh(const SurfaceMesh& mesh, const Vec3& at, double amplitude, double sigma);

/// Index of the vertex nearest to p.
int nearest_vertex(const SurfaceMesh& mesh, const Vec3& p);

}  // namespace slabsym
