#include "slabsym/monotone.hpp"

#include "slabsym/errors.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <cmath>

namespace slabsym {

MonotoneSolve solve_monotone_dirichlet(const EllipticOperatorField& op, const ScalarField& boundary_data,
                                       const std::vector<double>& rhs) {
  if (op.grid != boundary_data.grid) throw GridMismatch("monotone solve: operator and data grids differ");
  const DomainGrid& g = *op.grid;
  const auto& interior = g.interior_nodes();
  const int n = static_cast<int>(interior.size());
  if (!rhs.empty() && rhs.size() != interior.size()) throw InvalidInput("monotone solve: rhs size mismatch");
  std::vector<int> row_of(g.active_count(), -1);
  for (int m = 0; m < n; ++m) row_of[interior[m]] = m;

  const double h = g.spacing();
  MonotoneSolve out;
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  for (int m = 0; m < n; ++m) {
    const int k = interior[m];
    const NodeCoefficients& c = op.nodes[m];
    const double a11 = c.A(0, 0), a22 = c.A(1, 1), a12 = 0.5 * (c.A(0, 1) + c.A(1, 0));
    const double am = std::abs(a12);
    double wx_p = (a11 - am) / (h * h), wx_m = wx_p;
    double wy_p = (a22 - am) / (h * h), wy_m = wy_p;
    double center = (-2 * a11 - 2 * a22 + 2 * am) / (h * h) + c.C;
    // first-order terms
    auto first_order = [&](double bi, double& wp, double& wm) {
      if (std::abs(bi) * h / 2.0 <= wp * h * h) {
        wp += bi / (2 * h);
        wm -= bi / (2 * h);
      } else {
        ++out.upwinded;
        if (bi > 0) {
          wp += bi / h;
          center -= bi / h;
        } else {
          wm += -bi / h;
          center += bi / h;
        }
      }
    };
    first_order(c.B.x(), wx_p, wx_m);
    first_order(c.B.y(), wy_p, wy_m);
    struct Entry {
      int di, dj;
      double w;
    };
    std::vector<Entry> entries = {{1, 0, wx_p}, {-1, 0, wx_m}, {0, 1, wy_p}, {0, -1, wy_m}};
    if (a12 >= 0) {
      entries.push_back({1, 1, am / (h * h)});
      entries.push_back({-1, -1, am / (h * h)});
    } else {
      entries.push_back({1, -1, am / (h * h)});
      entries.push_back({-1, 1, am / (h * h)});
    }
    double offsum = 0.0;
    for (const auto& e : entries) {
      if (e.w < -1e-14 * std::abs(center)) out.m_matrix = false;
      offsum += e.w;
      const int nb = g.neighbor(k, e.di, e.dj);
      if (row_of[nb] >= 0) {
        trip.emplace_back(m, row_of[nb], e.w);
      } else {
        b[m] -= e.w * boundary_data.values[nb];
      }
    }
    if (center + offsum > 1e-12 * std::abs(center)) out.m_matrix = false;
    trip.emplace_back(m, m, center);
    if (!rhs.empty()) b[m] += rhs[m];
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw Error("monotone solve: factorisation failed");
  const Eigen::VectorXd x = lu.solve(b);
  out.w = boundary_data;
  for (int m = 0; m < n; ++m) out.w.values[interior[m]] = x[m];
  return out;
}

ScalarField harmonic_extension(const ScalarField& g) {
  const auto op = EllipticOperatorField::uniform(g.grid, NodeCoefficients{});
  return solve_monotone_dirichlet(op, g).w;
}

}  // namespace slabsym
