#include "slabsym/errors.hpp"
#include "slabsym/linearization.hpp"
#include "slabsym/mean_curvature.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>

using namespace slabsym;
using testsupport::SmoothField;

namespace {

Vec2 sorted_eigenvalues(const Mat2& A) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(A);
  return es.eigenvalues();
}

std::vector<double> residual(const ScalarField& u, const PrescribedH& H) {
  auto r = mc_expanded(u);
  const auto& in = u.grid->interior_nodes();
  for (std::size_t k = 0; k < r.size(); ++k) r[k] -= 2.0 * H.eval(u.grid->position(in[k]), u[in[k]]).H;
  return r;
}

ScalarField difference(const ScalarField& a, const ScalarField& b) {
  std::vector<double> v(a.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = a.values[k] - b.values[k];
  return ScalarField(a.grid, v);
}

}  // namespace

TEST(PointwiseAij, Examples) {
  EXPECT_EQ(pointwise_aij(Vec2(0, 0)), Mat2::Identity());
  Eigen::VectorXd g1(1);
  g1 << 1.0;
  EXPECT_NEAR(pointwise_aij(g1)(0, 0), std::pow(2.0, -1.5), 1e-15);
  const Mat2 A = pointwise_aij(Vec2(1, 1));
  EXPECT_NEAR(A(0, 0), 0.384900179459750, 1e-12);
  EXPECT_NEAR(A(0, 1), -0.192450089729875, 1e-12);
  EXPECT_EQ(A(0, 1), A(1, 0));
  const Vec2 ev = sorted_eigenvalues(A);
  EXPECT_NEAR(ev(0), 1 / (3 * std::sqrt(3.0)), 1e-12);
  EXPECT_NEAR(ev(1), 1 / std::sqrt(3.0), 1e-12);
}

TEST(PointwiseAij, EigenstructureProperty) {
  std::mt19937 rng(101);
  std::normal_distribution<double> N(0.0, 2.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const Vec2 p(N(rng), N(rng));
    const double W = std::sqrt(1 + p.squaredNorm());
    const Vec2 ev = sorted_eigenvalues(pointwise_aij(p));
    EXPECT_NEAR(ev(0), 1 / (W * W * W), 1e-12);
    EXPECT_NEAR(ev(1), 1 / W, 1e-12);
  }
  for (int n : {3, 4}) {
    Eigen::VectorXd p(n);
    for (int i = 0; i < n; ++i) p(i) = N(rng);
    const double W = std::sqrt(1 + p.squaredNorm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pointwise_aij(p));
    EXPECT_NEAR(es.eigenvalues()(0), 1 / (W * W * W), 1e-12);
    for (int i = 1; i < n; ++i) EXPECT_NEAR(es.eigenvalues()(i), 1 / W, 1e-12);
  }
}

TEST(IntegratedAij, OneDimensionalExact) {
  Eigen::VectorXd bar(1), w(1);
  bar << 0.0;
  w << 1.0;
  EXPECT_NEAR(integrated_aij(bar, w, 32)(0, 0), 1 / std::sqrt(2.0), 1e-8);
  EXPECT_NEAR(simpson01([](double t) { return t * t * t; }, 2), 0.25, 1e-15);
}

TEST(DifferenceOperator, EqualFieldsGiveZeroDifference) {
  std::mt19937 rng(4);
  const auto g = testsupport::disk_grid(1.0 / 32);
  const auto u = SmoothField::random(rng).sample(g);
  const auto L = assemble_difference_operator(u, u, PrescribedH::constant(0.3));
  const auto& in = g->interior_nodes();
  const auto w = ScalarField::constant(g, 0.0);
  for (std::size_t k = 0; k < in.size(); ++k) {
    const auto d = differentials(u, in[k]);
    EXPECT_LT((L.nodes[k].A - pointwise_aij(d.gradient)).norm(), 1e-14);
    EXPECT_EQ(L.apply_at(w, k), 0.0);
  }
}

TEST(DifferenceOperator, IdentityAtRoundingLevel) {
  std::mt19937 rng(17);
  const auto g = testsupport::disk_grid(1.0 / 32);
  for (const auto& H : {PrescribedH::constant(0.0), PrescribedH::affine(0.2, 0.5)}) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto u = SmoothField::random(rng).sample(g);
      const auto ub = SmoothField::random(rng).sample(g);
      const auto L = assemble_difference_operator(u, ub, H, 128);
      const auto Lw = L.apply(difference(u, ub));
      const auto ru = residual(u, H), rb = residual(ub, H);
      for (std::size_t k = 0; k < Lw.size(); ++k) EXPECT_NEAR(Lw[k], ru[k] - rb[k], 1e-9);
      for (const auto& c : L.nodes) {
        EXPECT_EQ(c.A(0, 1), c.A(1, 0));
        EXPECT_NEAR(c.C, -2.0 * H.slope(), 1e-14);
      }
    }
  }
}

TEST(DifferenceOperator, QuadratureRefinementIsMonotone) {
  std::mt19937 rng(23);
  const auto g = testsupport::disk_grid(1.0 / 32);
  const auto u = SmoothField::random(rng, 1.5, 0.5).sample(g);
  const auto ub = SmoothField::random(rng, 1.5, 0.5).sample(g);
  const auto ru = residual(u, PrescribedH::constant(0.0)), rb = residual(ub, PrescribedH::constant(0.0));
  const auto w = difference(u, ub);
  double prev = INFINITY;
  for (int panels : {2, 4, 8, 16}) {
    const auto Lw = assemble_difference_operator(u, ub, PrescribedH::constant(0.0), panels).apply(w);
    double e = 0.0;
    for (std::size_t k = 0; k < Lw.size(); ++k) e = std::max(e, std::abs(Lw[k] - (ru[k] - rb[k])));
    EXPECT_LT(e, prev);
    prev = e;
  }
}

TEST(DifferenceOperator, RejectsProfileWithoutDerivative) {
  const auto g = testsupport::disk_grid(1.0 / 16);
  PrescribedH::General gen;
  gen.H = [](const Vec2&, double u, const Vec2&) { return std::tanh(u); };
  const auto u = ScalarField::constant(g, 0.1);
  EXPECT_THROW(assemble_difference_operator(u, u, PrescribedH::general(gen)), UnsupportedProfile);
}

TEST(NewtonOperator, MatchesCentralDifferences) {
  std::mt19937 rng(31);
  const auto g = testsupport::disk_grid(1.0 / 32);
  const auto H = PrescribedH::affine(-0.3, 0.4);
  for (int trial = 0; trial < 3; ++trial) {
    const auto u = SmoothField::random(rng).sample(g);
    const auto v = SmoothField::random(rng).sample(g);
    const double eps = 1e-6;
    std::vector<double> up(u.size()), um(u.size());
    for (std::size_t k = 0; k < up.size(); ++k) {
      up[k] = u.values[k] + eps * v.values[k];
      um[k] = u.values[k] - eps * v.values[k];
    }
    const auto rp = residual(ScalarField(g, up), H), rm = residual(ScalarField(g, um), H);
    const auto Jv = newton_operator(u, H).apply(v);
    for (std::size_t k = 0; k < Jv.size(); ++k) EXPECT_NEAR(Jv[k], (rp[k] - rm[k]) / (2 * eps), 1e-5);
  }
}

TEST(Ellipticity, ConstantExamples) {
  const auto g = testsupport::disk_grid(1.0 / 16);
  EXPECT_EQ(ellipticity_constant(ScalarField::constant(g, 1.0), ScalarField::constant(g, -2.0)), 1.0);
  const auto u = ScalarField::sample(g, [](const Vec2& x) { return x.x() + std::sqrt(2.0) * x.y(); });
  EXPECT_NEAR(ellipticity_constant(u, ScalarField::constant(g, 0.0)), 0.125, 1e-12);
}

TEST(Ellipticity, ConstantBoundsEveryAssembledEigenvalue) {
  std::mt19937 rng(43);
  const auto g = testsupport::disk_grid(1.0 / 24);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = SmoothField::random(rng, 1.2, 0.4).sample(g);
    const auto ub = SmoothField::random(rng, 1.2, 0.4).sample(g);
    const double k = ellipticity_constant(u, ub);
    EXPECT_GT(k, 0.0);
    EXPECT_LE(k, 1.0);
    const auto L = assemble_difference_operator(u, ub, PrescribedH::constant(0.0));
    for (const auto& c : L.nodes) EXPECT_LE(k, sorted_eigenvalues(c.A)(0) + 1e-12);
  }
}

TEST(Ellipticity, BoundHoldsOnRandomFields) {
  std::mt19937 rng(47);
  const auto g = testsupport::disk_grid(1.0 / 24);
  const auto flat = verify_ellipticity_bound(ScalarField::constant(g, 0.0), 8, 1);
  EXPECT_EQ(flat.violations, 0);
  EXPECT_NEAR(flat.min_margin, 0.0, 1e-12);
  for (int trial = 0; trial < 10; ++trial) {
    const auto u = SmoothField::random(rng, 2.0, 0.5).sample(g);
    const auto r = verify_ellipticity_bound(u, 16, trial);
    EXPECT_EQ(r.violations, 0);
    EXPECT_EQ(r.witness_node, -1);
    EXPECT_GT(r.checks, 0);
    EXPECT_GE(r.min_margin, -1e-12);
    EXPECT_LE(r.equality_gap, 1e-12);
  }
}
