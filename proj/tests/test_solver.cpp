#include "slabsym/errors.hpp"
#include "slabsym/mean_curvature.hpp"
#include "slabsym/profile.hpp"
#include "slabsym/solver.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace slabsym;

namespace {

double max_error(const ScalarField& u, const std::function<double(const Vec2&)>& f, bool interior_only = false) {
  double e = 0.0;
  const auto& g = *u.grid;
  if (interior_only) {
    for (int k : g.interior_nodes()) e = std::max(e, std::abs(u[k] - f(g.position(k))));
  } else {
    for (int k = 0; k < g.active_count(); ++k) e = std::max(e, std::abs(u[k] - f(g.position(k))));
  }
  return e;
}

double round_trip(const ScalarField& u, const PrescribedH& H) {
  const auto mc = mc_expanded(u);
  const auto& in = u.grid->interior_nodes();
  double r = 0.0;
  for (std::size_t k = 0; k < mc.size(); ++k) {
    const auto d = differentials(u, in[k]);
    r = std::max(r, std::abs(mc[k] - 2 * H.eval(u.grid->position(in[k]), u[in[k]], d.gradient).H));
  }
  return r;
}

}  // namespace

TEST(GraphDirichlet, AffineIsExactlyMinimal) {
  const auto g = testsupport::disk_grid(1.0 / 16, 0.9, Vec2(0.05, 0.1));
  auto f = [](const Vec2& x) { return 2 * x.x() - x.y() + 1; };
  SolveDiagnostics d;
  const auto u = solve_graph_dirichlet(g, PrescribedH::constant(0.0), f, {}, &d);
  EXPECT_TRUE(d.converged);
  EXPECT_LE(max_error(u, f), 1e-10);
}

TEST(GraphDirichlet, HemisphereCap) {
  for (double h : {1.0 / 32, 1.0 / 64}) {
    const auto g = testsupport::disk_grid(h, 0.8);
    auto f = [](const Vec2& x) { return std::sqrt(std::max(0.0, 1 - x.squaredNorm())); };
    SolveDiagnostics d;
    const auto u = solve_graph_dirichlet(g, PrescribedH::constant(-1.0), f, {}, &d);
    EXPECT_LE(max_error(u, f), 5 * h * h) << "h = " << h;
    EXPECT_LE(d.interior_residual, 1e-10);
    EXPECT_LE(round_trip(u, PrescribedH::constant(-1.0)), 1e-10);
  }
}

TEST(GraphDirichlet, ManufacturedWithQuadraticNewton) {
  const auto f = testsupport::manufactured_field();
  const double h = 1.0 / 64;
  const auto g = testsupport::disk_grid(h);
  SolveDiagnostics d;
  const auto u = solve_graph_dirichlet(g, testsupport::manufactured_H(f), [&](const Vec2& x) { return f.value(x); }, {}, &d);
  EXPECT_LE(max_error(u, [&](const Vec2& x) { return f.value(x); }), 5 * h * h);
  const auto& r = d.residual_history;
  ASSERT_GE(r.size(), 3u);
  EXPECT_LE(r.back(), 1e-10);
  int observed = 0;
  for (std::size_t k = 1; k < r.size(); ++k) {
    if (r[k - 1] < 0.1 && r[k] > 1e-13) {
      EXPECT_LE(r[k], 50.0 * r[k - 1] * r[k - 1]) << "iterate " << k;
      ++observed;
    }
  }
  EXPECT_GE(observed, 2);
}

TEST(GraphDirichlet, ComparisonProbe) {
  const auto g = testsupport::disk_grid(1.0 / 24);
  const auto H = PrescribedH::affine(0.2, 1.0);
  auto base = [](const Vec2& x) { return 0.2 * x.x() - 0.1 * x.y() * x.y(); };
  const auto u0 = solve_graph_dirichlet(g, H, base, {});
  for (double eps : {1e-3, 1e-2, 0.1}) {
    const auto u1 = solve_graph_dirichlet(g, H, [&](const Vec2& x) { return base(x) + eps; }, {});
    for (int k = 0; k < g->active_count(); ++k) EXPECT_GE(u1[k], u0[k] - 1e-10);
  }
}

TEST(GraphDirichlet, NonConvergenceCarriesHistory) {
  const auto g = testsupport::disk_grid(1.0 / 16, 0.8);
  SolverSettings s;
  s.max_iterations = 1;
  s.damping = Damping::none;
  try {
    solve_graph_dirichlet(g, PrescribedH::constant(-1.0), [](const Vec2&) { return 0.0; }, s);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence& e) {
    EXPECT_FALSE(e.history().empty());
  }
}

TEST(GraphFlux, ZeroFluxGivesFlatSolution) {
  const auto g = testsupport::disk_grid(1.0 / 16);
  const auto H = PrescribedH::affine(0.0, 1.0);
  for (const BoundaryConditionSpec& bc :
       {BoundaryConditionSpec{ContactAngle{}}, BoundaryConditionSpec{CurvatureFlux::affine(0.0, 0.0)}}) {
    const auto u = solve_graph_flux(g, H, bc, {});
    EXPECT_LE(max_error(u, [](const Vec2&) { return 0.0; }), 1e-12) << bc_name(bc);
  }
}

TEST(GraphFlux, ContactAngleMatchesRadialOracle) {
  const testsupport::RadialContactOracle rho(0.0, 1.0, std::numbers::pi / 3);
  ContactAngle ca;
  ca.gamma1 = ca.gamma2 = std::numbers::pi / 3;
  double prev = 0.0;
  for (double h : {1.0 / 16, 1.0 / 32}) {
    const auto g = testsupport::disk_grid(h);
    SolveDiagnostics d;
    const auto u = solve_graph_flux(g, PrescribedH::affine(0.0, 1.0), ca, {}, &d);
    const double e = max_error(u, [&](const Vec2& x) { return rho(std::min(1.0, x.norm())); }, true);
    EXPECT_LE(e, 5 * h * h) << "h = " << h;
    EXPECT_LE(d.boundary_residual, 10 * h * h);
    for (double r : boundary_flux_residual(u, ca)) EXPECT_LE(std::abs(r), 10 * h * h);
    if (prev > 0) {
      EXPECT_GE(prev / e, 3.0);
    }
    prev = e;
  }
}

TEST(GraphFlux, CurvatureFluxReproducesContactAngle) {
  const double h = 1.0 / 32;
  const auto g = testsupport::disk_grid(h);
  const auto H = PrescribedH::affine(0.0, 1.0);
  ContactAngle ca;
  ca.gamma1 = ca.gamma2 = 2.0;
  const auto u = solve_graph_flux(g, H, ca, {});
  // grad u . eta / W = cos(gamma) with radial symmetry is du/deta = cot(gamma)
  const double flux = 1.0 / std::tan(ca.gamma1);
  const auto v = solve_graph_flux(g, H, CurvatureFlux::affine(flux, 0.0), {});
  double e = 0.0;
  for (int k = 0; k < g->active_count(); ++k) e = std::max(e, std::abs(u[k] - v[k]));
  EXPECT_LE(e, 5 * h * h);
}

TEST(GraphFlux, RadialFluxBowlSatisfiesData) {
  const double h = 1.0 / 32;
  const auto g = testsupport::disk_grid(h, 1.0, Vec2(0.25, -0.1));
  RadialFlux rf;
  rf.c = 0.3;
  rf.origin = Vec2(0.25, -0.1);
  SolveDiagnostics d;
  const auto u = solve_graph_flux(g, PrescribedH::affine(0.0, 1.0), rf, {}, &d);
  EXPECT_TRUE(d.converged);
  for (double r : boundary_flux_residual(u, rf)) EXPECT_LE(std::abs(r), 10 * h * h);
  EXPECT_LE(round_trip(u, PrescribedH::affine(0.0, 1.0)), 1e-10);
  // inward flux -c r < 0 on the rim: the rim sits above the center
  EXPECT_GT(u[g->boundary_nodes().front()], u[g->nearest_active(rf.origin)]);
}

TEST(GraphFlux, IncompatibleFluxWithoutNormalisation) {
  const auto g = testsupport::disk_grid(1.0 / 16);
  ContactAngle ca;
  ca.gamma1 = ca.gamma2 = 1.2;
  EXPECT_THROW(solve_graph_flux(g, PrescribedH::constant(0.3), ca, {}), IncompatibleFlux);
  SolverSettings s;
  s.mean_height = 0.0;
  SolveDiagnostics d;
  EXPECT_NO_THROW(solve_graph_flux(g, PrescribedH::constant(0.3), ca, s, &d));
  EXPECT_TRUE(d.converged);
}

TEST(BoundaryConditions, Validation) {
  ContactAngle ca;
  ca.gamma1 = 0.0;
  EXPECT_THROW(validate(ca), InvalidInput);
  ca.gamma1 = std::numbers::pi;
  EXPECT_THROW(validate(ca), InvalidInput);
  RadialFlux rf;
  rf.c = 0.0;
  EXPECT_THROW(validate(rf), InvalidInput);
  EXPECT_THROW(validate(CurvatureFlux::affine(0.0, 0.5)), InvalidInput);
  EXPECT_NO_THROW(validate(CurvatureFlux::affine(1.0, -0.5)));
}

TEST(Profile, CylinderFromHalfCurvature) {
  Slab slab;
  const double R = 0.7;
  SolverSettings s;
  const auto p = solve_axisymmetric_profile(slab, PrescribedH::constant(1 / (2 * R)), std::numbers::pi / 2,
                                            std::numbers::pi / 2, s);
  for (std::size_t k = 0; k < p.size(); ++k) {
    EXPECT_NEAR(p.x[k], R, 1e-8);
    EXPECT_NEAR(p.phi[k], std::numbers::pi / 2, 1e-8);
  }
  EXPECT_NEAR(p.lower.radius, R, 1e-8);
  EXPECT_NEAR(p.upper.radius, R, 1e-8);
  EXPECT_LE(p.shooting_residual, 1e-8);
}

TEST(Profile, SphereZone) {
  Slab slab;
  slab.offset_hi = 0.8;
  const double R = 1.0, d = 0.8;
  const double r0 = std::sqrt(R * R - d * d / 4);
  const double gamma = std::numbers::pi - std::atan2(r0, d / 2);
  const auto p = solve_axisymmetric_profile(slab, PrescribedH::constant(1 / R), gamma, gamma, {});
  EXPECT_NEAR(p.lower.radius, r0, 1e-7);
  EXPECT_NEAR(p.upper.radius, r0, 1e-7);
  EXPECT_NEAR(p.lower.angle, gamma, 1e-7);
  EXPECT_NEAR(p.upper.angle, gamma, 1e-7);
  for (std::size_t k = 0; k < p.size(); ++k)
    EXPECT_NEAR(std::hypot(p.x[k], p.z[k] - d / 2), R, 1e-7);
}

TEST(Profile, AffineHeightMatchesIndependentIntegrator) {
  Slab slab;
  const auto H = PrescribedH::affine(0.6, 0.2);
  const double g1 = std::numbers::pi / 2;
  const auto p = solve_axisymmetric_profile(slab, H, g1, g1, {});
  EXPECT_LE(p.shooting_residual, 1e-8);
  // fixed-step RK4 from the same start, at two step sizes
  auto run = [&](int steps_per_sample) {
    std::array<double, 3> y{p.x[0], p.z[0], p.phi[0]};
    auto f = [&](const std::array<double, 3>& s) {
      return std::array<double, 3>{std::cos(s[2]), std::sin(s[2]), 2 * H(s[1]) - std::sin(s[2]) / s[0]};
    };
    double dev = 0.0;
    for (std::size_t k = 1; k < p.size(); ++k) {
      const double ds = (p.s[k] - p.s[k - 1]) / steps_per_sample;
      for (int m = 0; m < steps_per_sample; ++m) {
        const auto k1 = f(y);
        std::array<double, 3> t;
        for (int i = 0; i < 3; ++i) t[i] = y[i] + 0.5 * ds * k1[i];
        const auto k2 = f(t);
        for (int i = 0; i < 3; ++i) t[i] = y[i] + 0.5 * ds * k2[i];
        const auto k3 = f(t);
        for (int i = 0; i < 3; ++i) t[i] = y[i] + ds * k3[i];
        const auto k4 = f(t);
        for (int i = 0; i < 3; ++i) y[i] += ds / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      }
      dev = std::max({dev, std::abs(y[0] - p.x[k]), std::abs(y[1] - p.z[k])});
    }
    return dev;
  };
  EXPECT_LE(run(16), 1e-8);
  EXPECT_LE(run(32), 1e-8);
  for (std::size_t k = 1; k < p.size(); ++k) EXPECT_GT(p.z[k], p.z[k - 1]);
}

TEST(Profile, NoSignChangeInBracket) {
  Slab slab;
  SolverSettings s;
  s.bracket_lo = 0.5;
  s.bracket_hi = 0.6;
  EXPECT_THROW(solve_axisymmetric_profile(slab, PrescribedH::constant(1 / (2 * 0.7)), std::numbers::pi / 2,
                                          std::numbers::pi / 2, s),
               NoSolutionInBracket);
}
