#pragma once

#include "slabsym/grid.hpp"
#include "slabsym/mean_curvature.hpp"
#include "slabsym/prescribed_h.hpp"
#include "slabsym/region.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <random>

namespace testsupport {

using slabsym::Mat2;
using slabsym::Vec2;
using slabsym::Vec3;

inline std::shared_ptr<const slabsym::DomainGrid> disk_grid(double h, double radius = 1.0, Vec2 center = Vec2::Zero()) {
  return slabsym::DomainGrid::build(std::make_shared<slabsym::DiskRegion>(center, radius), h, center);
}

inline std::shared_ptr<const slabsym::DomainGrid> box_grid(double h, double half = 1.0) {
  return slabsym::DomainGrid::build(std::make_shared<slabsym::BoxRegion>(Vec2(-half, -half), Vec2(half, half)), h,
                                    Vec2::Zero());
}

// Smooth field with closed-form derivatives:
//   u = a0 + a1 x + a2 y + c sin(k1 x + p1) cos(k2 y + p2)
struct SmoothField {
  double a0 = 0, a1 = 0, a2 = 0, c = 0, k1 = 1, k2 = 1, p1 = 0, p2 = 0;

  double value(const Vec2& x) const {
    return a0 + a1 * x.x() + a2 * x.y() + c * std::sin(k1 * x.x() + p1) * std::cos(k2 * x.y() + p2);
  }
  Vec2 gradient(const Vec2& x) const {
    const double s = std::sin(k1 * x.x() + p1), co = std::cos(k1 * x.x() + p1);
    const double s2 = std::sin(k2 * x.y() + p2), c2 = std::cos(k2 * x.y() + p2);
    return Vec2(a1 + c * k1 * co * c2, a2 - c * k2 * s * s2);
  }
  Mat2 hessian(const Vec2& x) const {
    const double s = std::sin(k1 * x.x() + p1), co = std::cos(k1 * x.x() + p1);
    const double s2 = std::sin(k2 * x.y() + p2), c2 = std::cos(k2 * x.y() + p2);
    Mat2 H;
    H << -c * k1 * k1 * s * c2, -c * k1 * k2 * co * s2, -c * k1 * k2 * co * s2, -c * k2 * k2 * s * c2;
    return H;
  }
  slabsym::ScalarField sample(std::shared_ptr<const slabsym::DomainGrid> g) const {
    return slabsym::ScalarField::sample(g, [this](const Vec2& x) { return value(x); });
  }

  static SmoothField random(std::mt19937& rng, double slope = 0.6, double amp = 0.3) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    SmoothField f;
    f.a0 = U(rng);
    f.a1 = slope * U(rng);
    f.a2 = slope * U(rng);
    f.c = amp * U(rng);
    f.k1 = 1.0 + 0.5 * U(rng);
    f.k2 = 1.0 + 0.5 * U(rng);
    f.p1 = 3.0 * U(rng);
    f.p2 = 3.0 * U(rng);
    return f;
  }
};

// 0.3 sin x sin y
inline SmoothField manufactured_field() {
  SmoothField f;
  f.c = -0.3;
  f.p2 = std::numbers::pi / 2;
  return f;
}

// H(x) with 2 H = mc of f, so that f solves the Dirichlet problem with its own trace
inline slabsym::PrescribedH manufactured_H(const SmoothField& f) {
  slabsym::PrescribedH::General gen;
  gen.H = [f](const Vec2& x, double, const Vec2&) {
    return 0.5 * slabsym::mc_from_derivatives(f.gradient(x), f.hessian(x));
  };
  gen.dH_du = [](const Vec2&, double, const Vec2&) { return 0.0; };
  return slabsym::PrescribedH::general(gen);
}

// Random harmonic cubic on every active node, shifted so its maximum over the
// boundary nodes is 0, attained at x0.
inline slabsym::ScalarField hopf_instance(std::shared_ptr<const slabsym::DomainGrid> g, std::mt19937& rng, int& x0) {
  std::uniform_real_distribution<double> U(-1, 1);
  const double th = 3.2 * U(rng);
  const double a1 = std::cos(th), a2 = std::sin(th);
  const double b1 = 0.4 * U(rng), b2 = 0.4 * U(rng), c1 = 0.2 * U(rng), c2 = 0.2 * U(rng);
  auto H = [&](const Vec2& p) {
    const double x = p.x(), y = p.y();
    return a1 * x + a2 * y + b1 * (x * x - y * y) + 2 * b2 * x * y + c1 * (x * x * x - 3 * x * y * y) +
           c2 * (3 * x * x * y - y * y * y);
  };
  x0 = -1;
  for (int b : g->boundary_nodes())
    if (x0 < 0 || H(g->position(b)) > H(g->position(x0))) x0 = b;
  const double top = H(g->position(x0));
  return slabsym::ScalarField::sample(g, [&](const Vec2& x) { return H(x) - top; });
}

// Nonpositive boundary data for the interior probes, at least `gap` below zero
inline slabsym::ScalarField nonpositive_data(std::shared_ptr<const slabsym::DomainGrid> g, std::mt19937& rng, double gap) {
  std::uniform_real_distribution<double> U(-1, 1);
  const double a = U(rng), b = U(rng), c = U(rng);
  return slabsym::ScalarField::sample(g, [&](const Vec2& x) {
    return std::min(0.0, a + b * x.x() + c * std::sin(3 * x.y())) - 0.05 * (1 + x.x()) * (1 + x.x()) - gap;
  });
}

}  // namespace testsupport
