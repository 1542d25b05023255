#pragma once

#include "slabsym/grid.hpp"

#include <Eigen/Dense>

#include <vector>

namespace slabsym {

/// (1/W) sum u_ii - (1/W^3) sum u_i u_j u_ij for a graph in any dimension n.
/// Equals n H for the upward normal (-grad u, 1)/W, so an upper hemisphere of
/// radius R gives -n/R.
double mc_from_derivatives(const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess);

inline double mc_from_derivatives(const Vec2& grad, const Mat2& hess) {
  const double W2 = 1.0 + grad.squaredNorm();
  const double W = std::sqrt(W2);
  return hess.trace() / W - grad.dot(hess * grad) / (W2 * W);
}

/// Expanded (non-divergence) form with centred stencils, one value per
/// interior node (aligned with grid->interior_nodes()).
std::vector<double> mc_expanded(const ScalarField& u);

/// Conservative flux-difference form of div(grad u / W), aligned with
/// grid->interior_nodes(). Agrees with mc_expanded to O(h^2).
std::vector<double> mc_divergence_form(const ScalarField& u);

/// Divergence form at a single interior node.
double mc_divergence_at(const ScalarField& u, int active);

}  // namespace slabsym
