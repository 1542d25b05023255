#pragma once

namespace slabsym {

/// Central tolerance record shared by all modules.
struct Tolerances {
  double algebraic = 1e-10;        // exact identities
  double discretization_factor = 5.0;  // discretization claims are factor * h^2
  double unit_length = 1e-12;      // unit-vector checks

  double discretization(double h) const { return discretization_factor * h * h; }
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace slabsym
