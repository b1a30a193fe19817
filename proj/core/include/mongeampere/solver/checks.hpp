#pragma once

#include "mongeampere/geometry/affine_map.hpp"
#include "mongeampere/solver/solve.hpp"

#include <vector>

namespace ma::solver {

/// |det A|^{2/n}: the value scale keeping f unchanged under x -> A x + t.
double normalized_scale(const geometry::AffineMap& map);

/// Image of the problem under x -> A x + t: density c^n |det A|^{-2} f o A^{-1},
/// boundary data c g o A^{-1}, same node numbering.
MAProblem transformed_problem(const MAProblem& problem, const geometry::AffineMap& map, double c);

struct EquivarianceReport {
  bool pass = false;
  double c = 1.0;
  /// max over nodes of |u'(A x_i + t) - c u(x_i)|
  double max_difference = 0.0;
  /// 2 tol max(1, max |c u|)
  double threshold = 0.0;
  Index worst_node = -1;
  SolveReport original;
  SolveReport transformed;
};

/// Solves the problem and its affine image and compares c u with the image solution.
EquivarianceReport affine_equivariance_check(const MAProblem& problem, const geometry::AffineMap& map, double c,
                                             const SolveOptions& opts = {});

struct ComparisonReport {
  bool boundary_ok = true;
  bool mass_ok = true;
  bool preconditions_ok = true;
  bool conclusion_ok = true;
  /// preconditions and conclusion
  bool pass = true;
  double worst_boundary = 0.0;  // max over boundary nodes of u - v
  double worst_mass = 0.0;      // max over interior nodes of mu_v - mu_u
  double worst_gap = 0.0;       // max over nodes of u - v
  Index worst_node = -1;
  std::vector<Index> violations;
};

/// Discrete comparison: u <= v on boundary nodes and mu_u >= mu_v at interior
/// nodes imply u <= v + tol at every node. Masses are computed when not given.
ComparisonReport comparison_check(const convexfn::PLConvexFunction& u, const convexfn::PLConvexFunction& v,
                                  double tol = 1e-9, const Vec* mass_u = nullptr, const Vec* mass_v = nullptr);

}  // namespace ma::solver
