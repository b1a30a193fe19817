#pragma once
// Normalized configuration at a flat boundary piece.
//
// L maps a cylinder standing on the facet to K_{2,2} = (0,2) x B_2^{n-1}, with
// the facet going to {x_1 = 0}. The affine l_g removes the boundary data on
// the facet and tilts by M/2 x_1, so that u_0 = u o L^{-1} - l_g is <= 0 in
// K_{2,2} and vanishes on F = {0} x B_2^{n-1}.

#include "mongeampere/convexfn/pl_function.hpp"
#include "mongeampere/geometry/affine_map.hpp"
#include "mongeampere/regularity/amp.hpp"
#include "mongeampere/regularity/fit.hpp"

#include <vector>

namespace ma::regularity {

struct ConverseOptions {
  /// Affinity tolerance for u on the facet, relative to max |u|.
  double affine_tol = 1e-9;
  /// Tolerance of the sign assertions on u_0.
  double tolerance = 1e-9;
  /// Lateral sample count per axis when searching the upper set D.
  int lateral_samples = 12;
};

struct ConverseSetup {
  geometry::AffineMap L;
  /// in normalized coordinates
  AffineFunction l_g;
  /// max(sup of v on D, 0)
  double M = 0.0;
  /// |gradient of l_g o L|, the Lipschitz constant in original coordinates
  double lipschitz = 0.0;
  /// u_0(L x_i) at every node
  Vec u0;
  /// nodes with L x_i in the closed K_{2,2}
  std::vector<Index> in_cylinder;
  double max_u0_cylinder = 0.0;
  double max_abs_u0_face = 0.0;
  Index face_nodes = 0;
};

/// Throws InvalidArgument when u is not affine on the facet or when either
/// sign condition on u_0 fails.
ConverseSetup converse_setup(const convexfn::PLConvexFunction& u, std::size_t facet,
                             const ConverseOptions& opts = {});
ConverseSetup converse_setup(const convexfn::PLConvexFunction& u, std::size_t facet, const Evaluator& eval,
                             const ConverseOptions& opts = {});

struct ConverseProfile {
  std::vector<double> x1;
  std::vector<double> u0;
  /// min over samples of |u_0| / a_upper(x_1)
  double constant = 0.0;
  bool pass = false;
};

/// u_0 along the x_1 axis of the normalized cylinder at the given depths in (0, 1].
ConverseProfile converse_profile(const ConverseSetup& setup, const Evaluator& eval, int dim,
                                 const std::vector<double>& depths);

}  // namespace ma::regularity
