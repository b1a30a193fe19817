#pragma once

#include "mongeampere/geometry/polytope.hpp"

namespace ma::geometry {

/// K_{h,rho} = (0, h) x B_rho^{n-1}.
class Cylinder {
 public:
  Cylinder(int n, double height, double radius);

  int dim() const noexcept { return n_; }
  double height() const noexcept { return h_; }
  double radius() const noexcept { return rho_; }

  bool contains(const Vec& x) const;
  bool contains_closed(const Vec& x, double tol = 1e-12) const;

  /// Inscribed polytope: the rectangle itself for n = 2, a prism over a
  /// regular polygon with `sides` sides for n = 3.
  ConvexPolytope inscribed_polytope(int sides = 32) const;

 private:
  int n_;
  double h_;
  double rho_;
};

}  // namespace ma::geometry
