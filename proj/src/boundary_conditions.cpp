#include "slabsym/boundary_conditions.hpp"

#include "slabsym/errors.hpp"

#include <cmath>
#include <numbers>

namespace slabsym {

CurvatureFlux CurvatureFlux::affine(double a, double b) {
  CurvatureFlux f;
  f.a = {a, a};
  f.b = {b, b};
  f.h[0] = [a, b](double H0) { return a + b * H0; };
  f.h[1] = f.h[0];
  return f;
}

namespace {

void check_gamma(double g, const char* name) {
  if (!std::isfinite(g) || g <= 0.0 || g >= std::numbers::pi)
    throw InvalidInput(std::string("contact angle: ") + name + " must lie in (0, pi)");
}

struct Validator {
  void operator()(const ContactAngle& c) const {
    check_gamma(c.gamma1, "gamma1");
    check_gamma(c.gamma2, "gamma2");
  }
  void operator()(const FixedBoundary& f) const {
    if (f.curves.empty()) throw InvalidInput("fixed boundary: at least one curve required");
    for (const auto& c : f.curves) c.validate();
    if (!std::isfinite(f.height)) throw InvalidInput("fixed boundary: height must be finite");
  }
  void operator()(const CurvatureFlux& f) const {
    if (!f.h[0]) throw InvalidInput("curvature flux: h for plate 1 is required");
    if (!(f.H0_min < f.H0_max)) throw InvalidInput("curvature flux: empty declared H0 range");
    constexpr int samples = 257;
    for (int p = 0; p < 2; ++p) {
      if (!f.h[p]) continue;
      double prev = f.h[p](f.H0_min);
      for (int k = 1; k < samples; ++k) {
        const double H0 = f.H0_min + (f.H0_max - f.H0_min) * k / (samples - 1);
        const double v = f.h[p](H0);
        if (!std::isfinite(v)) throw InvalidInput("curvature flux: h is not finite on its range");
        if (v > prev + 1e-14 * (1.0 + std::abs(prev)))
          throw InvalidInput("curvature flux: h must be a nonincreasing function of the boundary mean curvature");
        prev = v;
      }
    }
  }
  void operator()(const RadialFlux& r) const {
    if (!(r.c > 0.0) || !std::isfinite(r.c)) throw InvalidInput("radial flux: c must be a positive constant");
    if (!r.origin.allFinite()) throw InvalidInput("radial flux: origin must be finite");
  }
  void operator()(const Dirichlet& d) const {
    if (!d.g) throw InvalidInput("dirichlet: boundary data missing");
  }
};

}  // namespace

void validate(const BoundaryConditionSpec& bc) { std::visit(Validator{}, bc); }

std::string bc_name(const BoundaryConditionSpec& bc) {
  static const char* names[] = {"contact_angle", "fixed_boundary", "curvature_flux", "radial_flux", "dirichlet"};
  return names[bc.index()];
}

}  // namespace slabsym
