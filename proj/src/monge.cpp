#include "slabsym/monge.hpp"

#include "slabsym/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace slabsym {

namespace {

struct Fit {
  Eigen::Matrix<double, 6, 1> coef = Eigen::Matrix<double, 6, 1>::Zero();
  double residual = 0.0;
};

Fit fit_quadratic(const std::vector<Vec3>& local) {
  const int m = static_cast<int>(local.size());
  Eigen::MatrixXd V(m, 6);
  Eigen::VectorXd z(m);
  for (int r = 0; r < m; ++r) {
    const double x = local[r].x(), y = local[r].y();
    V.row(r) << x * x, x * y, y * y, x, y, 1.0;
    z[r] = local[r].z();
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(V);
  if (qr.rank() < 6) throw RankDeficient("monge patch: neighbourhood does not determine a quadratic");
  Fit out;
  out.coef = qr.solve(z);
  out.residual = std::sqrt((V * out.coef - z).squaredNorm() / m);
  return out;
}

}  // namespace

MongePatch monge_patch(const SurfaceMesh& mesh, int vertex, const MongeOptions& opt) {
  if (vertex < 0 || static_cast<std::size_t>(vertex) >= mesh.vertices.size())
    throw InvalidInput("monge patch: vertex out of range");
  const Vec3 p = mesh.vertices[vertex];
  std::vector<Vec3> nbrs;
  for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
    if (static_cast<int>(k) == vertex) continue;
    if ((mesh.vertices[k] - p).norm() <= opt.radius) nbrs.push_back(mesh.vertices[k]);
  }
  if (nbrs.size() < 6) throw RankDeficient("monge patch: fewer than 6 neighbours within radius");
  nbrs.push_back(p);

  Vec3 n_out = mesh.vertex_normals()[vertex];
  if (n_out.norm() == 0.0) throw RankDeficient("monge patch: vertex has no incident faces");

  MongePatch patch;
  patch.origin = p;
  patch.neighbors = static_cast<int>(nbrs.size()) - 1;
  Fit fit;
  Vec3 t1, t2, n_in;
  for (int pass = 0; pass <= opt.refinements; ++pass) {
    n_in = -n_out;
    t1 = any_orthogonal(n_in);
    t2 = n_in.cross(t1);
    std::vector<Vec3> local;
    local.reserve(nbrs.size());
    const double scale = 1.0 / opt.radius;  // conditioning
    for (const auto& q : nbrs) {
      const Vec3 r = q - p;
      local.emplace_back(r.dot(t1) * scale, r.dot(t2) * scale, r.dot(n_in) * scale);
    }
    fit = fit_quadratic(local);
    // undo scaling: zeta = s*Z(x/s) -> quadratic coefs / s... rescale to physical units
    fit.coef.head<3>() *= scale;
    fit.coef[5] /= scale;
    fit.residual /= scale;
    if (pass == opt.refinements) break;
    // tilt the frame to the fitted tangent plane
    const double gx = fit.coef[3], gy = fit.coef[4];
    const Vec3 new_in = (n_in - gx * t1 - gy * t2).normalized();
    n_out = -new_in;
  }
  patch.tangent1 = t1;
  patch.tangent2 = t2;
  patch.outward_normal = -n_in;
  patch.a = fit.coef[0];
  patch.b = fit.coef[1];
  patch.c = fit.coef[2];
  patch.d = fit.coef[3];
  patch.e = fit.coef[4];
  patch.f = fit.coef[5];
  patch.residual = fit.residual;
  patch.low_confidence = fit.residual > opt.residual_ratio * opt.radius;

  const Vec2 g(patch.d, patch.e);
  Mat2 K;
  K << 2 * patch.a, patch.b, patch.b, 2 * patch.c;
  const Mat2 I = Mat2::Identity() + g * g.transpose();
  const Mat2 II = K / std::sqrt(1.0 + g.squaredNorm());
  const Mat2 S = I.inverse() * II;
  Eigen::EigenSolver<Mat2> es(S);
  Vec2 k = es.eigenvalues().real();
  if (k[0] > k[1]) std::swap(k[0], k[1]);
  patch.principal_curvatures = k;
  patch.mean_curvature = 0.5 * (k[0] + k[1]);
  return patch;
}

}  // namespace slabsym
