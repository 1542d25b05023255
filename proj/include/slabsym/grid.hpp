#pragma once

#include "slabsym/geometry.hpp"
#include "slabsym/region.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace slabsym {

enum class NodeTag : std::uint8_t { exterior, interior, boundary };

/// Uniform lattice origin + (i h, j h) with cut-cell tagging against a Region.
///
/// A node is interior when it lies in the region together with its whole
/// 3x3 neighbourhood (so centred first, second and mixed differences are
/// available), boundary when it lies in the region otherwise, and exterior
/// outside. Only non-exterior ("active") nodes carry field values.
class DomainGrid {
 public:
  /// `anchor` is forced to be a lattice node; pass the region center to keep
  /// the lattice symmetric about it.
  static std::shared_ptr<const DomainGrid> build(std::shared_ptr<const Region> region, double h,
                                                 const Vec2& anchor);

  double spacing() const { return h_; }
  const Vec2& origin() const { return origin_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  const Region& region() const { return *region_; }
  std::shared_ptr<const Region> region_ptr() const { return region_; }

  NodeTag tag(int i, int j) const;
  int active_index(int i, int j) const;
  int active_count() const { return static_cast<int>(active_.size()); }
  const std::array<int, 2>& lattice(int active) const { return active_[active]; }
  NodeTag tag_of(int active) const { return tag(active_[active][0], active_[active][1]); }

  Vec2 position(int i, int j) const { return origin_ + h_ * Vec2(i, j); }
  Vec2 position(int active) const { return position(active_[active][0], active_[active][1]); }

  /// Active index of the neighbour (di, dj) away, or -1.
  int neighbor(int active, int di, int dj) const;

  const std::vector<int>& interior_nodes() const { return interior_; }
  const std::vector<int>& boundary_nodes() const { return boundary_; }

  /// Closest boundary point and inward normal for a boundary node.
  const BoundaryFoot& foot(int active) const;

  /// Active node whose lattice position is nearest to x (searching outward
  /// when the nearest lattice node is exterior); -1 if none within 3 cells.
  int nearest_active(const Vec2& x) const;

 private:
  DomainGrid() = default;

  std::shared_ptr<const Region> region_;
  double h_ = 0.0;
  Vec2 origin_ = Vec2::Zero();
  int nx_ = 0, ny_ = 0;
  std::vector<NodeTag> tags_;
  std::vector<int> index_;
  std::vector<std::array<int, 2>> active_;
  std::vector<int> interior_;
  std::vector<int> boundary_;
  std::vector<BoundaryFoot> feet_;  // indexed by active, meaningful on boundary nodes
};

/// Real values on the active nodes of a DomainGrid.
struct ScalarField {
  std::shared_ptr<const DomainGrid> grid;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(std::shared_ptr<const DomainGrid> g, std::vector<double> v);

  static ScalarField sample(std::shared_ptr<const DomainGrid> g,
                            const std::function<double(const Vec2&)>& f);
  static ScalarField constant(std::shared_ptr<const DomainGrid> g, double c);

  double operator[](int active) const { return values[active]; }
  double& operator[](int active) { return values[active]; }
  std::size_t size() const { return values.size(); }

  /// Throws InvalidInput when the invariants (count, finiteness) fail.
  void validate() const;
};

void require_same_grid(const ScalarField& a, const ScalarField& b);

struct NodeDifferentials {
  Vec2 gradient = Vec2::Zero();
  Mat2 hessian = Mat2::Zero();
  double W = 1.0;
};

/// Centred second-order differences at an interior node.
NodeDifferentials differentials(const ScalarField& u, int active);

/// Differentials at every interior node, aligned with grid->interior_nodes().
std::vector<NodeDifferentials> differentials(const ScalarField& u);

/// Weights of a weighted least-squares quadratic fit around a node, evaluated
/// at an arbitrary nearby point. value/gradient/hessian at `at` are linear in
/// the stencil values, so the weights double as Jacobian rows.
struct FitStencil {
  Vec2 at = Vec2::Zero();
  std::vector<int> nodes;
  std::vector<double> value;
  std::vector<Vec2> gradient;
  std::vector<Mat2> hessian;

  double eval_value(const ScalarField& u) const;
  Vec2 eval_gradient(const ScalarField& u) const;
  Mat2 eval_hessian(const ScalarField& u) const;
};

/// Builds a quadratic fit on active nodes near `center`. The radius starts at
/// 2.5 h and grows until the system is well conditioned; RankDeficient after 4.5 h.
FitStencil make_fit(const DomainGrid& grid, int center, const Vec2& at);

/// One-sided second-order gradient at a (typically boundary) node.
Vec2 boundary_gradient(const ScalarField& u, int active);

/// Value of u at an arbitrary point in (or within a cell of) the domain:
/// tensor quadratic interpolation on the 3x3 block around the nearest node,
/// the boundary fit where that block is incomplete.
double interpolate(const ScalarField& u, const Vec2& x);

}  // namespace slabsym
