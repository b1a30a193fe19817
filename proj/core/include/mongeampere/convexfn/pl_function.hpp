#pragma once

#include "mongeampere/geometry/polytope.hpp"
#include "mongeampere/types.hpp"

#include <memory>
#include <vector>

namespace ma::convexfn {

/// Nodes of a closed polytopal domain, split into boundary and interior.
struct NodeSet {
  geometry::ConvexPolytope domain;
  std::vector<Vec> points;
  std::vector<char> boundary;
  std::vector<double> distance;  // dist(x_i, boundary of the domain)

  NodeSet(geometry::ConvexPolytope dom, std::vector<Vec> pts, std::vector<char> is_boundary);
};

/// Lower convex envelope of the lifted points (x_i, u_i) over the domain.
/// Values are stored as given; nodes above the envelope are inactive.
class PLConvexFunction {
 public:
  PLConvexFunction(std::shared_ptr<const NodeSet> nodes, Vec values);
  PLConvexFunction(geometry::ConvexPolytope domain, std::vector<Vec> points,
                   std::vector<char> boundary, Vec values);

  PLConvexFunction with_values(Vec values) const { return {nodes_, std::move(values)}; }

  int dim() const noexcept { return nodes_->domain.dim(); }
  Index size() const noexcept { return static_cast<Index>(nodes_->points.size()); }
  const std::vector<Vec>& nodes() const noexcept { return nodes_->points; }
  const Vec& node(Index i) const { return nodes_->points[i]; }
  const Vec& values() const noexcept { return values_; }
  double value(Index i) const { return values_(i); }
  bool is_boundary(Index i) const { return nodes_->boundary[i] != 0; }
  double boundary_distance(Index i) const { return nodes_->distance[i]; }
  const geometry::ConvexPolytope& domain() const noexcept { return nodes_->domain; }
  const std::shared_ptr<const NodeSet>& node_set() const noexcept { return nodes_; }

  std::vector<Index> boundary_indices() const;
  std::vector<Index> interior_indices() const;

 private:
  std::shared_ptr<const NodeSet> nodes_;
  Vec values_;
};

/// Subdifferential of the envelope at a node, { p : u_j >= u_i + p.(x_j - x_i) for all j }.
struct Cell {
  bool empty = true;
  bool bounded = true;
  double volume = 0.0;
  std::vector<Vec> vertices;
  /// (j, (n-1)-volume of the face cut by node j).
  std::vector<std::pair<Index, double>> facets;
};

struct CellOptions {
  /// Node lists to try first (e.g. mesh neighbours); all nodes when null.
  const std::vector<std::vector<Index>>* candidates = nullptr;
  /// Scan every node at the end so that no constraint is missed.
  bool exact = true;
};

Cell subgradient_cell(const PLConvexFunction& u, Index i, const CellOptions& opts = {});

/// Envelope value at node i (equals u_i iff the node is active).
double envelope_value(const PLConvexFunction& u, Index i);

/// Envelope value at an arbitrary point of the domain.
double evaluate(const PLConvexFunction& u, const Vec& x);

}  // namespace ma::convexfn
