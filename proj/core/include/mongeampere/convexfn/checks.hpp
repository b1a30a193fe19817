#pragma once

#include "mongeampere/convexfn/measure.hpp"
#include "mongeampere/convexfn/modulus.hpp"

namespace ma::convexfn {

struct SubgradientReport {
  bool pass = true;
  double worst_margin = 0.0;  // min over checks of omega(d)/d - |p|
  Index worst_node = -1;
  Index checked = 0;
};

/// |p| <= omega(d)/d with d = dist(x_i, boundary) for every vertex p of every
/// interior cell. omega is evaluated at the exact distances, with the boundary
/// augmented by the ray exits x_i + t p/|p|.
SubgradientReport subgradient_bound_check(const PLConvexFunction& u, double tol = 1e-9);

struct SuperadditivityReport {
  bool pass = true;
  double worst = 0.0;  // min over nodes of mu_{u+v} - mu_u - mu_v
  std::vector<Index> failures;
  Vec mass_u, mass_v, mass_sum;
};

SuperadditivityReport superadditivity_check(const PLConvexFunction& u, const PLConvexFunction& v,
                                            double tol = 1e-9);

}  // namespace ma::convexfn
