#include "slabsym/mean_curvature.hpp"

#include "slabsym/errors.hpp"

#include <cmath>

namespace slabsym {

double mc_from_derivatives(const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess) {
  if (hess.rows() != grad.size() || hess.cols() != grad.size())
    throw InvalidInput("mean curvature: gradient/hessian dimension mismatch");
  const double W2 = 1.0 + grad.squaredNorm();
  const double W = std::sqrt(W2);
  return hess.trace() / W - grad.dot(hess * grad) / (W2 * W);
}

std::vector<double> mc_expanded(const ScalarField& u) {
  const auto& nodes = u.grid->interior_nodes();
  std::vector<double> out(nodes.size());
  for (std::size_t m = 0; m < nodes.size(); ++m) {
    const NodeDifferentials d = differentials(u, nodes[m]);
    out[m] = mc_from_derivatives(d.gradient, d.hessian);
  }
  return out;
}

double mc_divergence_at(const ScalarField& u, int k) {
  const DomainGrid& g = *u.grid;
  if (g.tag_of(k) != NodeTag::interior) throw StencilUnavailable("divergence form: node is not interior");
  const double h = g.spacing();
  auto at = [&](int di, int dj) { return u.values[g.neighbor(k, di, dj)]; };
  // flux grad u / W on the face between (0,0) and (s,0) (x-faces) or (0,s) (y-faces)
  auto xflux = [&](int s) {
    const double px = s * (at(s, 0) - at(0, 0)) / h;
    const double py = (at(0, 1) - at(0, -1) + at(s, 1) - at(s, -1)) / (4 * h);
    return px / std::sqrt(1 + px * px + py * py);
  };
  auto yflux = [&](int s) {
    const double py = s * (at(0, s) - at(0, 0)) / h;
    const double px = (at(1, 0) - at(-1, 0) + at(1, s) - at(-1, s)) / (4 * h);
    return py / std::sqrt(1 + px * px + py * py);
  };
  return (xflux(1) - xflux(-1) + yflux(1) - yflux(-1)) / h;
}

std::vector<double> mc_divergence_form(const ScalarField& u) {
  const auto& nodes = u.grid->interior_nodes();
  std::vector<double> out(nodes.size());
  for (std::size_t m = 0; m < nodes.size(); ++m) out[m] = mc_divergence_at(u, nodes[m]);
  return out;
}

}  // namespace slabsym
