#pragma once

#include "mongeampere/convexfn/pl_function.hpp"
#include "mongeampere/geometry/affine_map.hpp"
#include "mongeampere/geometry/polytope.hpp"

#include <memory>
#include <vector>

namespace ma::solver {

/// Axis coordinates for tensor grids.
std::vector<double> uniform_axis(double lo, double hi, int cells);
/// lo + (hi - lo) (k/m)^p, clustered toward lo for p > 1.
std::vector<double> power_axis(double lo, double hi, int cells, double exponent);
/// First step `first` next to lo, steps growing geometrically up to hi.
std::vector<double> geometric_axis(double lo, double hi, int cells, double first);
/// Chebyshev-Lobatto points, clustered toward both ends.
std::vector<double> chebyshev_axis(double lo, double hi, int cells);

/// Conforming simplicial mesh of a convex polytope.
class Mesh {
 public:
  /// Tensor grid over the box spanned by the axes, Kuhn triangulation (n! simplices per box).
  static Mesh tensor(const std::vector<std::vector<double>>& axes);
  /// Delaunay mesh of a convex polygon: boundary samples every ~h and a
  /// triangular lattice of spacing h inside.
  static Mesh polygon(const geometry::ConvexPolytope& poly, double h);

  int dim() const noexcept { return domain_.dim(); }
  Index size() const noexcept { return static_cast<Index>(nodes_.size()); }
  Index simplex_count() const noexcept { return static_cast<Index>(simplices_.size() / (dim() + 1)); }
  const geometry::ConvexPolytope& domain() const noexcept { return domain_; }
  const std::vector<Vec>& nodes() const noexcept { return nodes_; }
  const std::vector<char>& boundary() const noexcept { return boundary_; }
  bool is_boundary(Index i) const { return boundary_[i] != 0; }
  /// Vertex indices of simplex s.
  const Index* simplex(Index s) const { return simplices_.data() + s * (dim() + 1); }
  double simplex_volume(Index s) const;
  Vec simplex_centroid(Index s) const;
  const std::vector<std::vector<Index>>& neighbours() const noexcept { return neighbours_; }

  /// Smallest distance from an interior node to the boundary.
  double min_interior_distance() const;
  /// Longest edge.
  double max_edge() const;

  Mesh transformed(const geometry::AffineMap& map) const;

  std::shared_ptr<const convexfn::NodeSet> node_set() const;

  /// Simplex containing x (within tolerance), -1 when outside.
  Index locate(const Vec& x) const;
  /// Piecewise-linear interpolation of nodal values.
  double interpolate(const Vec& values, const Vec& x) const;

  /// Sum of simplex volumes minus the domain volume (should be ~0).
  double coverage_defect() const;

 private:
  Mesh(geometry::ConvexPolytope domain, std::vector<Vec> nodes, std::vector<Index> simplices);
  void finish();
  Vec barycentric(Index s, const Vec& x) const;

  geometry::ConvexPolytope domain_;
  std::vector<Vec> nodes_;
  std::vector<char> boundary_;
  std::vector<Index> simplices_;
  std::vector<std::vector<Index>> neighbours_;
  mutable std::shared_ptr<const convexfn::NodeSet> node_set_;

  // bucket index for locate()
  Vec bucket_lo_, bucket_width_;
  std::vector<long> bucket_dims_;
  std::vector<std::vector<Index>> buckets_;
};

}  // namespace ma::solver
