#include "mongeampere/geometry/cylinder.hpp"

#include <cmath>
#include <numbers>

namespace ma::geometry {

Cylinder::Cylinder(int n, double height, double radius) : n_(n), h_(height), rho_(radius) {
  require(n >= 2, "cylinder: n must be at least 2");
  require(height > 0 && radius > 0, "cylinder: height and radius must be positive");
}

bool Cylinder::contains(const Vec& x) const {
  require(x.size() == n_, "cylinder: dimension mismatch");
  return x(0) > 0 && x(0) < h_ && x.tail(n_ - 1).norm() < rho_;
}

bool Cylinder::contains_closed(const Vec& x, double tol) const {
  require(x.size() == n_, "cylinder: dimension mismatch");
  return x(0) >= -tol && x(0) <= h_ + tol && x.tail(n_ - 1).norm() <= rho_ + tol;
}

ConvexPolytope Cylinder::inscribed_polytope(int sides) const {
  if (n_ == 2) {
    Vec lo(2), hi(2);
    lo << 0.0, -rho_;
    hi << h_, rho_;
    return ConvexPolytope::box(lo, hi);
  }
  if (n_ == 3) {
    require(sides >= 3, "cylinder: need at least 3 sides");
    std::vector<Vec> pts;
    for (int k = 0; k < sides; ++k) {
      double t = 2.0 * std::numbers::pi * k / sides;
      for (double x1 : {0.0, h_}) {
        Vec v(3);
        v << x1, rho_ * std::cos(t), rho_ * std::sin(t);
        pts.push_back(v);
      }
    }
    return ConvexPolytope::from_vertices(pts);
  }
  double half = rho_ / std::sqrt(n_ - 1.0);
  Vec lo = Vec::Constant(n_, -half), hi = Vec::Constant(n_, half);
  lo(0) = 0.0;
  hi(0) = h_;
  return ConvexPolytope::box(lo, hi);
}

}  // namespace ma::geometry
