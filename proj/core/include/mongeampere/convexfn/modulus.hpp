#pragma once

#include "mongeampere/convexfn/pl_function.hpp"

#include <string>
#include <vector>

namespace ma::convexfn {

struct ModulusCurve {
  std::vector<double> delta;
  std::vector<double> omega;
  std::vector<std::string> warnings;

  /// omega nondecreasing and omega/delta nonincreasing (up to tol).
  bool monotone(double tol = 1e-12) const;
  /// Linear interpolation between the sampled deltas (0 below the first).
  double at(double d) const;
};

/// Boundary-reduced modulus: sup over boundary points x and nodes y of
/// (u(x) - u(y)) min(1, delta / |x - y|). Along a segment from y to x the
/// envelope lies below the chord, so every term is a lower bound for the
/// modulus of the envelope; pairs with |x - y| <= delta enter unscaled.
/// Extra boundary points with their envelope values may be appended.
ModulusCurve modulus(const PLConvexFunction& u, const std::vector<double>& deltas,
                     const std::vector<Vec>& extra_points = {},
                     const std::vector<double>& extra_values = {});

struct ZeroDataModulus {
  ModulusCurve pairwise;  // boundary reduction, boundary augmented by node projections
  ModulusCurve distance;  // sup over y of -u(y) min(1, delta / dist(y))
  double discrepancy = 0.0;
};

/// Both forms for zero boundary data; throws if boundary values are nonzero.
ZeroDataModulus modulus_zero_data(const PLConvexFunction& u, const std::vector<double>& deltas);

/// `count` geometrically spaced deltas in [lo, hi].
std::vector<double> geometric_deltas(double lo, double hi, int count);

}  // namespace ma::convexfn
