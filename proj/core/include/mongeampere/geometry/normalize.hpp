#pragma once

#include "mongeampere/geometry/polytope.hpp"

namespace ma::geometry {

struct NormalizeOptions {
  double tolerance = 1e-6;
  int max_iterations = 10000;
};

struct Normalization {
  AffineMap map;
  /// min over facets of the image's distance to the origin, minus 1.
  double inner_margin;
  /// n minus the largest image vertex norm.
  double outer_margin;
  int iterations;
};

/// Affine map L with B_1 in L(P) in B_n, built from a minimum-volume
/// enclosing ellipsoid of the vertices (Khachiyan iteration with away steps).
Normalization normalize(const ConvexPolytope& p, const NormalizeOptions& opts = {});

}  // namespace ma::geometry
