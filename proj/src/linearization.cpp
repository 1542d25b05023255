#include "slabsym/linearization.hpp"

#include "slabsym/errors.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace slabsym {

namespace {

constexpr int kDim = 2;

void check_panels(int panels) {
  if (panels < 2 || panels % 2 != 0) throw InvalidInput("simpson: panel count must be even and >= 2");
}

/// Stencil derivatives of w at an interior node.
struct Stencil {
  double value;
  Vec2 grad;
  Mat2 hess;
};

Stencil stencil_at(const ScalarField& w, int k) {
  const NodeDifferentials d = differentials(w, k);
  return {w.values[k], d.gradient, d.hessian};
}

}  // namespace

Eigen::MatrixXd pointwise_aij(const Eigen::VectorXd& grad) {
  const double W2 = 1.0 + grad.squaredNorm();
  const double W = std::sqrt(W2);
  const auto n = grad.size();
  return Eigen::MatrixXd::Identity(n, n) / W - grad * grad.transpose() / (W2 * W);
}

Mat2 pointwise_aij(const Vec2& grad) {
  const double W2 = 1.0 + grad.squaredNorm();
  const double W = std::sqrt(W2);
  return Mat2::Identity() / W - grad * grad.transpose() / (W2 * W);
}

Vec2 mc_gradient_coefficients(const Vec2& p, const Mat2& hess) {
  const double W2 = 1.0 + p.squaredNorm();
  const double W = std::sqrt(W2);
  const double W3 = W2 * W;
  const double W5 = W3 * W2;
  // d/dt of the first sum: -(sum u_ii) (p.w) / W^3
  // d/dt of the second sum: -(w_i p_j u_ij + p_i w_j u_ij) / W^3 + 3 (p.D2u.p)(p.w) / W^5
  return -hess.trace() * p / W3 - 2.0 * (hess * p) / W3 + 3.0 * p.dot(hess * p) * p / W5;
}

Eigen::MatrixXd integrated_aij(const Eigen::VectorXd& grad_bar, const Eigen::VectorXd& grad_w, int panels) {
  check_panels(panels);
  return simpson01([&](double t) -> Eigen::MatrixXd { return pointwise_aij(Eigen::VectorXd(grad_bar + t * grad_w)); },
                   panels);
}

EllipticOperatorField EllipticOperatorField::uniform(std::shared_ptr<const DomainGrid> grid,
                                                     const NodeCoefficients& c) {
  EllipticOperatorField op;
  op.nodes.assign(grid->interior_nodes().size(), c);
  op.grid = std::move(grid);
  Eigen::SelfAdjointEigenSolver<Mat2> es(c.A);
  op.k = es.eigenvalues().minCoeff();
  return op;
}

double EllipticOperatorField::principal_at(const ScalarField& w, std::size_t pos) const {
  const Stencil s = stencil_at(w, grid->interior_nodes()[pos]);
  const NodeCoefficients& c = nodes[pos];
  return (c.A.cwiseProduct(s.hess)).sum() + c.B.dot(s.grad);
}

double EllipticOperatorField::apply_at(const ScalarField& w, std::size_t pos) const {
  const int k = grid->interior_nodes()[pos];
  return principal_at(w, pos) + nodes[pos].C * w.values[k];
}

std::vector<double> EllipticOperatorField::apply(const ScalarField& w) const {
  if (w.grid != grid) throw GridMismatch("operator and field live on different grids");
  std::vector<double> out(nodes.size());
  for (std::size_t m = 0; m < nodes.size(); ++m) out[m] = apply_at(w, m);
  return out;
}

nlohmann::json EllipticOperatorField::to_json() const {
  nlohmann::json j;
  j["k"] = k;
  j["spacing"] = grid->spacing();
  auto& arr = j["nodes"] = nlohmann::json::array();
  const auto& interior = grid->interior_nodes();
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    const auto [i, jj] = grid->lattice(interior[m]);
    const auto& c = nodes[m];
    arr.push_back({{"i", i},
                   {"j", jj},
                   {"A", {{c.A(0, 0), c.A(0, 1)}, {c.A(1, 0), c.A(1, 1)}}},
                   {"B", {c.B.x(), c.B.y()}},
                   {"C", c.C}});
  }
  return j;
}

EllipticOperatorField assemble_difference_operator(const ScalarField& u, const ScalarField& ubar,
                                                   const PrescribedH& profile, int panels) {
  require_same_grid(u, ubar);
  check_panels(panels);
  if (!profile.has_u_derivative()) throw UnsupportedProfile("difference operator: profile lacks dH/du");
  if (!profile.has_gradient_derivative())
    throw UnsupportedProfile("difference operator: gradient-dependent profile lacks dH/dgrad");
  const auto& grid = u.grid;
  const auto& interior = grid->interior_nodes();
  EllipticOperatorField op;
  op.grid = grid;
  op.nodes.resize(interior.size());
  for (std::size_t m = 0; m < interior.size(); ++m) {
    const int k = interior[m];
    const Stencil su = stencil_at(u, k);
    const Stencil sb = stencil_at(ubar, k);
    const Vec2 x = grid->position(k);
    // u^t = ubar + t w has stencil derivatives linear in t.
    auto at_t = [&](double t) {
      const double ut = sb.value + t * (su.value - sb.value);
      const Vec2 pt = sb.grad + t * (su.grad - sb.grad);
      const Mat2 Ht = sb.hess + t * (su.hess - sb.hess);
      return std::tuple<double, Vec2, Mat2>(ut, pt, Ht);
    };
    NodeCoefficients c;
    c.A = simpson01([&](double t) -> Mat2 { return pointwise_aij(std::get<1>(at_t(t))); }, panels);
    c.B = simpson01(
        [&](double t) -> Vec2 {
          const auto [ut, pt, Ht] = at_t(t);
          Vec2 b = mc_gradient_coefficients(pt, Ht);
          if (profile.depends_on_gradient()) b -= kDim * profile.eval(x, ut, pt).dH_dgrad;
          return b;
        },
        panels);
    c.C = -kDim * simpson01(
                      [&](double t) -> double {
                        const auto [ut, pt, Ht] = at_t(t);
                        return profile.eval(x, ut, pt).dH_du;
                      },
                      panels);
    op.nodes[m] = c;
  }
  op.k = ellipticity_constant(u, ubar);
  return op;
}

EllipticOperatorField newton_operator(const ScalarField& u, const PrescribedH& profile) {
  if (!profile.has_u_derivative()) throw UnsupportedProfile("newton operator: profile lacks dH/du");
  if (!profile.has_gradient_derivative())
    throw UnsupportedProfile("newton operator: gradient-dependent profile lacks dH/dgrad");
  const auto& grid = u.grid;
  const auto& interior = grid->interior_nodes();
  EllipticOperatorField op;
  op.grid = grid;
  op.nodes.resize(interior.size());
  double maxW3 = 1.0;
  for (std::size_t m = 0; m < interior.size(); ++m) {
    const int k = interior[m];
    const Stencil s = stencil_at(u, k);
    const HValue hv = profile.eval(grid->position(k), s.value, s.grad);
    NodeCoefficients c;
    c.A = pointwise_aij(s.grad);
    c.B = mc_gradient_coefficients(s.grad, s.hess);
    if (profile.depends_on_gradient()) c.B -= kDim * hv.dH_dgrad;
    c.C = -kDim * hv.dH_du;
    op.nodes[m] = c;
    maxW3 = std::max(maxW3, std::pow(1.0 + s.grad.squaredNorm(), 1.5));
  }
  op.k = 1.0 / maxW3;
  return op;
}

double ellipticity_constant(const ScalarField& u, const ScalarField& ubar) {
  require_same_grid(u, ubar);
  double maxW3 = 1.0;
  for (int k : u.grid->interior_nodes()) {
    const double gu = differentials(u, k).gradient.squaredNorm();
    const double gb = differentials(ubar, k).gradient.squaredNorm();
    maxW3 = std::max({maxW3, std::pow(1.0 + gu, 1.5), std::pow(1.0 + gb, 1.5)});
  }
  return 1.0 / maxW3;
}

EllipticityReport verify_ellipticity_bound(const ScalarField& u, int samples, std::uint64_t seed) {
  if (samples < 1) throw InvalidInput("ellipticity check: samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  EllipticityReport rep;
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (int k : u.grid->interior_nodes()) {
    const NodeDifferentials d = differentials(u, k);
    const Mat2 a = pointwise_aij(d.gradient);
    const double W3 = d.W * d.W * d.W;
    auto check = [&](Vec2 xi) {
      const double form = xi.dot(a * xi);
      const double margin = form - xi.squaredNorm() / W3;
      ++rep.checks;
      rep.min_margin = std::min(rep.min_margin, margin);
      if (margin < -1e-12) {
        if (rep.violations == 0) rep.witness_node = k;
        ++rep.violations;
      }
      return form;
    };
    for (int s = 0; s < samples; ++s) {
      Vec2 xi(normal(rng), normal(rng));
      if (xi.norm() == 0.0) xi = Vec2::UnitX();
      check(xi.normalized());
    }
    const double g = d.gradient.norm();
    const Vec2 par = g > 0.0 ? Vec2(d.gradient / g) : Vec2::UnitX();
    const double form = check(par);
    check(Vec2(-par.y(), par.x()));
    if (g > 0.0) rep.equality_gap = std::max(rep.equality_gap, std::abs(form - 1.0 / W3));
  }
  return rep;
}

}  // namespace slabsym
