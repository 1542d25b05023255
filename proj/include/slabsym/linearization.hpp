#pragma once

#include "slabsym/grid.hpp"
#include "slabsym/prescribed_h.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <memory>
#include <type_traits>
#include <vector>

namespace slabsym {

/// a_ij = delta_ij / W - p_i p_j / W^3 for gradient p (any dimension).
Eigen::MatrixXd pointwise_aij(const Eigen::VectorXd& grad);
Mat2 pointwise_aij(const Vec2& grad);

/// d/dp_k of  tr(D2u)/W - p.D2u.p/W^3 : the first-order coefficients of the
/// linearised mean-curvature operator.
Vec2 mc_gradient_coefficients(const Vec2& grad, const Mat2& hess);

/// Composite Simpson integral over t in [0,1] of a_ij(grad_bar + t grad_w).
Eigen::MatrixXd integrated_aij(const Eigen::VectorXd& grad_bar, const Eigen::VectorXd& grad_w, int panels);

/// Composite Simpson rule on [0,1]; panels must be even and >= 2.
template <class F>
auto simpson01(F&& f, int panels) {
  using R = std::decay_t<decltype(f(0.0))>;
  const double step = 1.0 / panels;
  R sum = f(0.0);
  sum += f(1.0);
  for (int k = 1; k < panels; ++k) {
    R v = f(k * step);
    sum += v * ((k % 2) ? 4.0 : 2.0);
  }
  R out = sum * (step / 3.0);
  return out;
}

struct NodeCoefficients {
  Mat2 A = Mat2::Identity();
  Vec2 B = Vec2::Zero();
  double C = 0.0;
};

/// L(w) = sum A^ij w_ij + sum B^i w_i + C w on the interior nodes of a grid.
struct EllipticOperatorField {
  std::shared_ptr<const DomainGrid> grid;
  std::vector<NodeCoefficients> nodes;  // aligned with grid->interior_nodes()
  double k = 1.0;                       // certified ellipticity constant

  /// Constant-coefficient operator on every interior node.
  static EllipticOperatorField uniform(std::shared_ptr<const DomainGrid> grid, const NodeCoefficients& c);

  /// L(w) at the interior node with position `pos` in interior_nodes().
  double apply_at(const ScalarField& w, std::size_t pos) const;
  std::vector<double> apply(const ScalarField& w) const;
  /// Second-order part only: sum A^ij w_ij + sum B^i w_i.
  double principal_at(const ScalarField& w, std::size_t pos) const;

  nlohmann::json to_json() const;
};

/// Operator satisfied by w = u - ubar: A^ij = int a_ij(grad u^t) dt,
/// B^i = int d/dp_i [mc - nH](u^t) dt, C = -n int dH/du(u^t) dt over the convex
/// family u^t = ubar + t w. With the same stencils on both sides,
/// L(w) = [mc(u) - nH(u)] - [mc(ubar) - nH(ubar)] node by node.
EllipticOperatorField assemble_difference_operator(const ScalarField& u, const ScalarField& ubar,
                                                   const PrescribedH& profile, int panels = 32);

/// Frechet derivative of  mc_expanded(u) - n H(u)  (the t-integral collapsed).
EllipticOperatorField newton_operator(const ScalarField& u, const PrescribedH& profile);

/// k = 1 / max over interior nodes of max(W_u^3, W_ubar^3).
double ellipticity_constant(const ScalarField& u, const ScalarField& ubar);

struct EllipticityReport {
  std::int64_t checks = 0;
  std::int64_t violations = 0;
  int witness_node = -1;            // first violating active node
  double min_margin = 0.0;          // min of form - |xi|^2/W^3
  double equality_gap = 0.0;        // max |form - 1/W^3| for xi parallel to grad u
};

/// Checks sum a_ij xi_i xi_j >= |xi|^2 / W^3 at every interior node for
/// `samples` random unit xi plus the directions parallel and orthogonal to grad u.
EllipticityReport verify_ellipticity_bound(const ScalarField& u, int samples, std::uint64_t seed = 0);

}  // namespace slabsym
