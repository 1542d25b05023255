#pragma once

#include "slabsym/boundary_curve.hpp"
#include "slabsym/geometry.hpp"

#include <json.hpp>

#include <array>
#include <functional>
#include <string>
#include <variant>
#include <vector>

namespace slabsym {

/// Constant contact angles with the two plates, measured inside the body.
/// Graph solves impose  grad u . eta / W = cos(gamma1)  with eta the inward
/// domain normal.
struct ContactAngle {
  double gamma1 = 1.5707963267948966;
  double gamma2 = 1.5707963267948966;
};

/// Boundary curves held fixed on the plates; graph solves take u = height on
/// the boundary of the region enclosed by curves[0].
struct FixedBoundary {
  std::vector<BoundaryCurve> curves;
  double height = 0.0;
};

/// du/deta = h_i(H0) with H0 the curvature of the boundary curve on plate i.
struct CurvatureFlux {
  using Function = std::function<double(double)>;
  std::array<Function, 2> h;         // plate 1, plate 2 (plate 2 may be empty)
  double H0_min = -10.0, H0_max = 10.0;  // declared range used for the monotonicity check
  // affine form a + b H0, kept for serialisation when used
  std::array<double, 2> a{0.0, 0.0}, b{0.0, 0.0};

  static CurvatureFlux affine(double a, double b);
};

/// du/deta = -c |x - origin|.
struct RadialFlux {
  double c = 1.0;
  Vec2 origin = Vec2::Zero();
};

struct Dirichlet {
  std::function<double(const Vec2&)> g;
};

using BoundaryConditionSpec = std::variant<ContactAngle, FixedBoundary, CurvatureFlux, RadialFlux, Dirichlet>;

/// Throws InvalidInput naming the broken invariant.
void validate(const BoundaryConditionSpec& bc);

std::string bc_name(const BoundaryConditionSpec& bc);

}  // namespace slabsym
