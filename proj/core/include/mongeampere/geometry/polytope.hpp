#pragma once

#include "mongeampere/geometry/affine_map.hpp"
#include "mongeampere/types.hpp"

#include <optional>
#include <vector>

namespace ma::geometry {

/// { x : normal . x <= offset } with |normal| = 1.
struct Halfspace {
  Vec normal;
  double offset = 0.0;

  double slack(const Vec& x) const { return offset - normal.dot(x); }
};

/// Bounded, full-dimensional convex polytope carrying both its vertex list and
/// its facet halfspaces. The two representations are computed from each other
/// and cross-checked on construction.
class ConvexPolytope {
 public:
  static ConvexPolytope from_halfspaces(const std::vector<Halfspace>& halfspaces);
  static ConvexPolytope from_vertices(const std::vector<Vec>& points);
  /// Uses both representations as given after checking that they agree.
  static ConvexPolytope from_both(const std::vector<Vec>& vertices,
                                  const std::vector<Halfspace>& halfspaces);

  static ConvexPolytope box(const Vec& lo, const Vec& hi);
  static ConvexPolytope unit_cube(int n);
  static ConvexPolytope regular_polygon(int sides, double radius);

  int dim() const noexcept { return dim_; }
  const std::vector<Vec>& vertices() const noexcept { return vertices_; }
  const std::vector<Halfspace>& halfspaces() const noexcept { return halfspaces_; }
  /// Indices of the vertices lying on facet k.
  const std::vector<int>& facet_vertices(std::size_t k) const { return facet_vertices_.at(k); }

  double volume() const;
  double facet_area(std::size_t k) const;
  double surface_area() const;
  Vec vertex_centroid() const;
  /// max |v - center| over vertices.
  double enclosing_radius(const Vec& center) const;

  bool contains(const Vec& x, double tol = 1e-12) const;
  /// dist(x, boundary) for x inside, 0 on the boundary, -dist(x, P) outside.
  double signed_boundary_distance(const Vec& x) const;

  ConvexPolytope transformed(const AffineMap& map) const;

  /// Largest violation of a halfspace by a vertex (should be ~0).
  double consistency_defect() const;

 private:
  ConvexPolytope() = default;

  int dim_ = 0;
  std::vector<Vec> vertices_;
  std::vector<Halfspace> halfspaces_;
  std::vector<std::vector<int>> facet_vertices_;
};

enum class InnerBodyStatus { Nonempty, Empty, MeasureZero };

struct InnerBody {
  InnerBodyStatus status = InnerBodyStatus::Empty;
  std::optional<ConvexPolytope> body;

  bool empty() const noexcept { return status != InnerBodyStatus::Nonempty; }
};

/// Omega_h = { x in P : dist(x, boundary) >= h }, computed by shifting every
/// facet inward by h.
InnerBody inner_body(const ConvexPolytope& p, double h);

/// Nearest point of the boundary for x inside P (foot on the closest facet).
Vec nearest_boundary_point(const Vec& x, const ConvexPolytope& p);

/// Euclidean projection onto P (identity for points of P).
Vec project(const Vec& x, const ConvexPolytope& p);

/// |Omega_a \ Omega_b| for 0 <= a < b.
double layer_volume(const ConvexPolytope& p, double a, double b);

/// Surface measure of the unit sphere in R^n: 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

/// (n-1)-volume of the boundary of the ball B_R times (b - a): the layer bound.
double layer_volume_bound(int n, double radius, double a, double b);

/// Volume of a full-dimensional polytope from its vertices and the vertex
/// sets of its facets (recursive cone decomposition).
double polytope_volume(const std::vector<Vec>& vertices,
                       const std::vector<std::vector<int>>& facets);

/// Affine dimension of a point set (rank of the centered coordinates).
int affine_dimension(const std::vector<Vec>& points, double tol = 1e-10);

}  // namespace ma::geometry
