#include "slabsym/grid.hpp"

#include "slabsym/errors.hpp"

#include <Eigen/Eigenvalues>

#include <array>

#include <cmath>
#include <limits>
#include <queue>

namespace slabsym {

std::shared_ptr<const DomainGrid> DomainGrid::build(std::shared_ptr<const Region> region, double h,
                                                    const Vec2& anchor) {
  if (!region) throw InvalidInput("grid: region is null");
  if (!(h > 0.0)) throw InvalidInput("grid: spacing must be positive");
  auto g = std::shared_ptr<DomainGrid>(new DomainGrid());
  g->region_ = region;
  g->h_ = h;
  const auto [lo, hi] = region->bounds();
  const int imin = static_cast<int>(std::floor((lo.x() - anchor.x()) / h)) - 2;
  const int imax = static_cast<int>(std::ceil((hi.x() - anchor.x()) / h)) + 2;
  const int jmin = static_cast<int>(std::floor((lo.y() - anchor.y()) / h)) - 2;
  const int jmax = static_cast<int>(std::ceil((hi.y() - anchor.y()) / h)) + 2;
  g->nx_ = imax - imin + 1;
  g->ny_ = jmax - jmin + 1;
  // Lattice positions are anchor + h * k with integer k, so that mirror nodes
  // about the anchor are bitwise mirrored.
  auto pos = [&](int i, int j) { return Vec2(anchor + h * Vec2(double(i + imin), double(j + jmin))); };
  g->origin_ = pos(0, 0);

  const std::size_t total = static_cast<std::size_t>(g->nx_) * g->ny_;
  std::vector<char> inside(total, 0);
  for (int j = 0; j < g->ny_; ++j)
    for (int i = 0; i < g->nx_; ++i) inside[j * g->nx_ + i] = region->contains(pos(i, j)) ? 1 : 0;

  g->tags_.assign(total, NodeTag::exterior);
  g->index_.assign(total, -1);
  for (int j = 0; j < g->ny_; ++j) {
    for (int i = 0; i < g->nx_; ++i) {
      if (!inside[j * g->nx_ + i]) continue;
      bool full = i > 0 && j > 0 && i + 1 < g->nx_ && j + 1 < g->ny_;
      for (int dj = -1; full && dj <= 1; ++dj)
        for (int di = -1; full && di <= 1; ++di)
          if (!inside[(j + dj) * g->nx_ + (i + di)]) full = false;
      g->tags_[j * g->nx_ + i] = full ? NodeTag::interior : NodeTag::boundary;
      g->index_[j * g->nx_ + i] = static_cast<int>(g->active_.size());
      g->active_.push_back({i, j});
    }
  }
  g->feet_.resize(g->active_.size());
  for (int k = 0; k < static_cast<int>(g->active_.size()); ++k) {
    const auto [i, j] = g->active_[k];
    if (g->tags_[j * g->nx_ + i] == NodeTag::interior) {
      g->interior_.push_back(k);
    } else {
      g->boundary_.push_back(k);
      g->feet_[k] = region->foot(pos(i, j));
      if (std::abs(g->feet_[k].inward_normal.norm() - 1.0) > 1e-12)
        throw InvalidInput("grid: boundary normal is not unit length");
    }
  }
  if (g->interior_.empty()) throw InvalidInput("grid: no interior nodes (spacing too coarse)");

  // Interior nodes must form one 4-connected component.
  std::vector<char> seen(g->active_.size(), 0);
  std::queue<int> q;
  q.push(g->interior_.front());
  seen[g->interior_.front()] = 1;
  std::size_t reached = 0;
  while (!q.empty()) {
    const int k = q.front();
    q.pop();
    ++reached;
    static constexpr int offs[4][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
    for (const auto& o : offs) {
      const int nb = g->neighbor(k, o[0], o[1]);
      if (nb >= 0 && !seen[nb] && g->tag_of(nb) == NodeTag::interior) {
        seen[nb] = 1;
        q.push(nb);
      }
    }
  }
  if (reached != g->interior_.size())
    throw InvalidInput("grid: interior nodes are not a single connected component");
  return g;
}

NodeTag DomainGrid::tag(int i, int j) const {
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return NodeTag::exterior;
  return tags_[static_cast<std::size_t>(j) * nx_ + i];
}

int DomainGrid::active_index(int i, int j) const {
  if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return -1;
  return index_[static_cast<std::size_t>(j) * nx_ + i];
}

int DomainGrid::neighbor(int active, int di, int dj) const {
  const auto [i, j] = active_[active];
  return active_index(i + di, j + dj);
}

const BoundaryFoot& DomainGrid::foot(int active) const {
  if (tag_of(active) != NodeTag::boundary) throw InvalidInput("grid: foot requested for a non-boundary node");
  return feet_[active];
}

int DomainGrid::nearest_active(const Vec2& x) const {
  const Vec2 rel = (x - origin_) / h_;
  const int i0 = static_cast<int>(std::lround(rel.x()));
  const int j0 = static_cast<int>(std::lround(rel.y()));
  int best = -1;
  double best_d = std::numeric_limits<double>::infinity();
  for (int ring = 0; ring <= 3 && best < 0; ++ring) {
    for (int dj = -ring; dj <= ring; ++dj) {
      for (int di = -ring; di <= ring; ++di) {
        if (std::max(std::abs(di), std::abs(dj)) != ring) continue;
        const int k = active_index(i0 + di, j0 + dj);
        if (k < 0) continue;
        const double d = (position(k) - x).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
    }
  }
  return best;
}

ScalarField::ScalarField(std::shared_ptr<const DomainGrid> g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
  validate();
}

ScalarField ScalarField::sample(std::shared_ptr<const DomainGrid> g,
                                const std::function<double(const Vec2&)>& f) {
  std::vector<double> v(static_cast<std::size_t>(g->active_count()));
  for (int k = 0; k < g->active_count(); ++k) v[k] = f(g->position(k));
  return ScalarField(std::move(g), std::move(v));
}

ScalarField ScalarField::constant(std::shared_ptr<const DomainGrid> g, double c) {
  std::vector<double> v(static_cast<std::size_t>(g->active_count()), c);
  return ScalarField(std::move(g), std::move(v));
}

void ScalarField::validate() const {
  if (!grid) throw InvalidInput("field: grid is null");
  if (values.size() != static_cast<std::size_t>(grid->active_count()))
    throw InvalidInput("field: value count does not match the active node count");
  for (double v : values)
    if (!std::isfinite(v)) throw InvalidInput("field: non-finite value");
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
  if (a.grid != b.grid) throw GridMismatch("fields live on different grids");
}

NodeDifferentials differentials(const ScalarField& u, int k) {
  const DomainGrid& g = *u.grid;
  if (g.tag_of(k) != NodeTag::interior)
    throw StencilUnavailable("differentials: node is not interior");
  const double h = g.spacing();
  auto at = [&](int di, int dj) { return u.values[g.neighbor(k, di, dj)]; };
  const double c = u.values[k];
  NodeDifferentials d;
  d.gradient = Vec2((at(1, 0) - at(-1, 0)) / (2 * h), (at(0, 1) - at(0, -1)) / (2 * h));
  const double uxx = (at(1, 0) - 2 * c + at(-1, 0)) / (h * h);
  const double uyy = (at(0, 1) - 2 * c + at(0, -1)) / (h * h);
  const double uxy = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * h * h);
  d.hessian << uxx, uxy, uxy, uyy;
  d.W = std::sqrt(1.0 + d.gradient.squaredNorm());
  return d;
}

std::vector<NodeDifferentials> differentials(const ScalarField& u) {
  const auto& nodes = u.grid->interior_nodes();
  std::vector<NodeDifferentials> out(nodes.size());
  for (std::size_t m = 0; m < nodes.size(); ++m) out[m] = differentials(u, nodes[m]);
  return out;
}

double FitStencil::eval_value(const ScalarField& u) const {
  double s = 0.0;
  for (std::size_t m = 0; m < nodes.size(); ++m) s += value[m] * u.values[nodes[m]];
  return s;
}

Vec2 FitStencil::eval_gradient(const ScalarField& u) const {
  Vec2 s = Vec2::Zero();
  for (std::size_t m = 0; m < nodes.size(); ++m) s += gradient[m] * u.values[nodes[m]];
  return s;
}

Mat2 FitStencil::eval_hessian(const ScalarField& u) const {
  Mat2 s = Mat2::Zero();
  for (std::size_t m = 0; m < nodes.size(); ++m) s += hessian[m] * u.values[nodes[m]];
  return s;
}

FitStencil make_fit(const DomainGrid& grid, int center, const Vec2& at) {
  const double h = grid.spacing();
  const auto [ci, cj] = grid.lattice(center);
  for (double radius = 2.5; radius <= 4.5 + 1e-9; radius += 1.0) {
    const int reach = static_cast<int>(std::ceil(radius));
    std::vector<int> nodes;
    for (int dj = -reach; dj <= reach; ++dj)
      for (int di = -reach; di <= reach; ++di) {
        if (di * di + dj * dj > radius * radius) continue;
        const int k = grid.active_index(ci + di, cj + dj);
        if (k >= 0) nodes.push_back(k);
      }
    if (nodes.size() < 8) continue;
    const int m = static_cast<int>(nodes.size());
    Eigen::MatrixXd V(m, 6);
    Eigen::VectorXd w(m);
    for (int r = 0; r < m; ++r) {
      const Vec2 xi = (grid.position(nodes[r]) - at) / h;
      V.row(r) << 1.0, xi.x(), xi.y(), xi.x() * xi.x(), xi.x() * xi.y(), xi.y() * xi.y();
      w[r] = std::exp(-xi.squaredNorm() / 4.0);
    }
    const Eigen::MatrixXd VtW = V.transpose() * w.asDiagonal();
    const Eigen::MatrixXd normal = VtW * V;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(normal, Eigen::EigenvaluesOnly);
    const auto ev = es.eigenvalues();
    if (!(ev.minCoeff() > 1e-9 * ev.maxCoeff())) continue;
    const Eigen::MatrixXd C = normal.ldlt().solve(VtW);  // 6 x m
    FitStencil fit;
    fit.at = at;
    fit.nodes = std::move(nodes);
    fit.value.resize(m);
    fit.gradient.resize(m);
    fit.hessian.resize(m);
    for (int r = 0; r < m; ++r) {
      fit.value[r] = C(0, r);
      fit.gradient[r] = Vec2(C(1, r), C(2, r)) / h;
      Mat2 H;
      H << 2 * C(3, r), C(4, r), C(4, r), 2 * C(5, r);
      fit.hessian[r] = H / (h * h);
    }
    return fit;
  }
  throw RankDeficient("local fit: not enough well-placed active nodes near the evaluation point");
}

Vec2 boundary_gradient(const ScalarField& u, int active) {
  return make_fit(*u.grid, active, u.grid->position(active)).eval_gradient(u);
}

double interpolate(const ScalarField& u, const Vec2& x) {
  const int k = u.grid->nearest_active(x);
  if (k < 0) throw RangeError("interpolate: point is far outside the grid's active nodes");
  const DomainGrid& g = *u.grid;
  if ((x - g.position(k)).norm() <= 1e-12 * g.spacing()) return u.values[k];
  std::array<int, 9> block;
  bool full = true;
  for (int dj = -1; dj <= 1 && full; ++dj)
    for (int di = -1; di <= 1 && full; ++di) {
      block[(dj + 1) * 3 + di + 1] = g.neighbor(k, di, dj);
      full = block[(dj + 1) * 3 + di + 1] >= 0;
    }
  if (!full) return make_fit(g, k, x).eval_value(u);
  // tensor quadratic Lagrange on the 3x3 block, exact at the nodes
  const Vec2 s = (x - g.position(k)) / g.spacing();
  auto basis = [](double t) { return std::array<double, 3>{0.5 * t * (t - 1), (1 - t) * (1 + t), 0.5 * t * (t + 1)}; };
  const auto bx = basis(s.x()), by = basis(s.y());
  double v = 0.0;
  for (int b = 0; b < 3; ++b)
    for (int a = 0; a < 3; ++a) v += bx[a] * by[b] * u.values[block[b * 3 + a]];
  return v;
}

}  // namespace slabsym
