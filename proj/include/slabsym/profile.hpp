#pragma once

#include "slabsym/geometry.hpp"
#include "slabsym/mesh.hpp"
#include "slabsym/prescribed_h.hpp"
#include "slabsym/solver.hpp"

#include <string>
#include <vector>

namespace slabsym {

struct ContactRecord {
  double radius = 0.0;
  double angle = 0.0;  // between M and the plate, inside the body
};

/// Meridian of an axisymmetric drop between the plates, z measured from
/// plate 1 along the slab axis and x the distance from the axis.
struct ProfileCurve {
  std::vector<double> s, x, z, phi;
  ContactRecord lower, upper;
  double shooting_residual = 0.0;

  void validate() const;
  std::size_t size() const { return s.size(); }
};

/// Shoots on the lower contact radius in [bracket_lo, bracket_hi]:
///   x' = cos phi,  z' = sin phi,  phi' = 2 H(z) - sin(phi) / x,
/// phi(0) = pi - gamma1, until phi = gamma2 at z = thickness. H is evaluated
/// at the height above plate 1.
ProfileCurve solve_axisymmetric_profile(const Slab& slab, const PrescribedH& profile, double gamma1, double gamma2,
                                        const SolverSettings& settings);

/// Upper-plate angle mismatch phi(d) - gamma2 for a given lower contact radius.
double profile_mismatch(const Slab& slab, const PrescribedH& profile, double gamma1, double gamma2, double r0,
                        double ode_tol);

/// Surface of revolution about the line through `axis_point` along the slab
/// axis, one ring per profile sample.
SurfaceMesh revolve_profile(const ProfileCurve& curve, const Slab& slab, int segments,
                            const Vec3& axis_point = Vec3::Zero());

/// "s,x,z,phi" rows.
void write_profile_csv(const ProfileCurve& curve, const std::string& path);

}  // namespace slabsym
