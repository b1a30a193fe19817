#pragma once
// Maximum principle and modulus bounds on solved functions.

#include "mongeampere/convexfn/modulus.hpp"
#include "mongeampere/convexfn/pl_function.hpp"
#include "mongeampere/geometry/affine_map.hpp"

#include <optional>
#include <vector>

namespace ma::regularity {

/// x -> gradient . x + offset
struct AffineFunction {
  Vec gradient;
  double offset = 0.0;
  double operator()(const Vec& x) const { return gradient.dot(x) + offset; }
};

/// Map with L(P) inside the closed unit ball: the normalizing map scaled
/// down until every image vertex has norm at most 1.
geometry::AffineMap unit_ball_map(const geometry::ConvexPolytope& p);

struct AmpOptions {
  double tolerance = 1e-6;
  /// Nodes at most this far from the boundary enter the tightness comparison.
  double tight_depth = 0.05;
  /// Affine function subtracted from u before the check.
  std::optional<AffineFunction> subtract;
};

struct AmpReport {
  bool pass = false;
  int dim = 0;
  /// C_n |det L|^{-2/n} Lambda^{1/n}
  double prefactor = 0.0;
  double constant = 0.0;
  double norm = 0.0;
  double min_margin = 0.0;
  Index worst_node = -1;
  Vec distance;
  Vec bound;
  /// Same prefactor with profile (|L| d)^{1/n}.
  Vec classical;
  Vec margin;
  /// New bound strictly below the classical one at every node with
  /// 0 < dist <= tight_depth.
  bool tighter = false;
  Index tight_checked = 0;
};

/// |u| <= C_n |det L|^{-2/n} Lambda^{1/n} a(|L| dist) at every node. Throws
/// InvalidArgument when L does not map the domain into the unit ball or when
/// u (after subtraction) is nonzero at a boundary node.
AmpReport amp_check(const convexfn::PLConvexFunction& u, const geometry::AffineMap& L, double Lambda,
                    const AmpOptions& opts = {});

struct ModulusBound {
  std::vector<double> delta;
  std::vector<double> lhs;
  std::vector<double> rhs;
  double min_margin = 0.0;
  bool pass = false;
};

/// omega_u(d) <= omega_g(d) + C_n |det L|^{-2/n} Lambda^{1/n} a(|L| d).
ModulusBound holder_bound_check(const convexfn::ModulusCurve& omega_u, const convexfn::ModulusCurve& omega_g,
                                const geometry::AffineMap& L, double Lambda, double tolerance = 1e-6);

/// omega_u(d) <= omega_g(d) + omega_0(d) for the zero-data solution u_0.
ModulusBound subadditivity_check(const convexfn::ModulusCurve& omega_u, const convexfn::ModulusCurve& omega_g,
                                 const convexfn::ModulusCurve& omega_0, double tolerance = 1e-6);

}  // namespace ma::regularity
