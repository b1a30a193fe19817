#pragma once
// Exponent fits on boundary profiles and modulus curves.

#include "mongeampere/convexfn/modulus.hpp"
#include "mongeampere/convexfn/pl_function.hpp"
#include "mongeampere/solver/mesh.hpp"

#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace ma::regularity {

using Evaluator = std::function<double(const Vec&)>;

/// Least-squares line y = intercept + slope x with a two-sigma band on the slope.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_lo = 0.0;
  double slope_hi = 0.0;
  double rms = 0.0;
  std::vector<double> residuals;
};

/// Needs at least two distinct abscissae.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

struct DepthSample {
  double depth = 0.0;
  /// |u(t) - u(0)|
  double rise = 0.0;
  bool used = false;
};

/// Log-factor model w(t) = C t (c0 - ln t)^s.
struct LogFactorFit {
  bool available = false;
  double c0 = 1.0;
  double s = 0.0;
  double s_lo = 0.0;
  double s_hi = 0.0;
  double log_c = 0.0;
  double rms = 0.0;
};

struct HolderFit {
  /// Slope of log rise against log depth.
  double alpha = 0.0;
  double alpha_lo = 0.0;
  double alpha_hi = 0.0;
  double log_c = 0.0;
  double rms = 0.0;
  double min_depth = 0.0;
  double max_depth = 0.0;
  int used = 0;
  std::vector<DepthSample> samples;
  std::vector<double> residuals;
  LogFactorFit log_factor;
};

struct HolderOptions {
  /// Mesh layers next to the face excluded from the fit.
  int skip_layers = 3;
  /// Depths beyond this are excluded.
  double max_depth = 0.25;
  /// Explicit lower end of the window; derived from the node layers when NaN.
  double min_depth = std::numeric_limits<double>::quiet_NaN();
  /// Sampling density of the dyadic depth ladder.
  int samples_per_octave = 1;
  /// c0 of the log-factor model (n = 2 only).
  double log_c0 = 1.0;
};

/// Power fit on given samples within [min_depth, max_depth]. Throws
/// InvalidArgument when fewer than 4 samples are usable.
HolderFit fit_power(const std::vector<double>& depth, const std::vector<double>& rise,
                    double min_depth, double max_depth, double log_c0 = 1.0, bool log_factor = false);

/// Distance from the face to the skip-th node layer parallel to it.
double layer_depth(const std::vector<Vec>& nodes, const geometry::Halfspace& face, int skip);

/// Samples u along the inward normal through the center of facet `facet`.
HolderFit holder_fit(const convexfn::PLConvexFunction& u, std::size_t facet, const HolderOptions& opts = {});
/// Same on a mesh, with nodal values interpolated piecewise linearly.
HolderFit holder_fit(const solver::Mesh& mesh, const Vec& values, std::size_t facet,
                     const HolderOptions& opts = {});
/// Core routine with an arbitrary evaluator.
HolderFit holder_fit(const geometry::ConvexPolytope& domain, const std::vector<Vec>& nodes,
                     const Evaluator& eval, std::size_t facet, const HolderOptions& opts = {});

/// Report of the bracket probe omega(d) ~ C d (1 - ln d)^s.
struct LogProbe {
  double s = 0.0;
  double s_lo = 0.0;
  double s_hi = 0.0;
  double log_c = 0.0;
  double decades = 0.0;
  int points = 0;
  bool conclusive = false;
  /// 0 <= s <= 1.2
  bool consistent = false;
  std::vector<std::string> warnings;
};

/// Fits s on positive samples. Fewer than 2 decades of delta marks the
/// report inconclusive.
LogProbe log_probe(const std::vector<double>& delta, const std::vector<double>& omega, double c0 = 1.0);

/// max over samples of omega(d) / d^alpha.
double holder_constant(const convexfn::ModulusCurve& curve, double alpha);

}  // namespace ma::regularity
