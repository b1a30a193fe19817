#pragma once

// Explicit comparison functions on the cylinder K_{1,sqrt 2} = (0,1) x B^{n-1}.
//
//   w(x) = a(x_1) * b(x'),   b(x') = |x'|^2 / 2 - 1,
//
// with a(t) = t^{2/n - [n==2] eps} for the lower barrier w_eps and
// a(t) = t (1/2 - ln t)^{1/2} (n = 2) or t^{2/n} (n >= 3) for w_bar.
// All profiles are continuously extended by 0 at t = 0.

#include "mongeampere/types.hpp"

#include <vector>

namespace ma::barriers {

enum class Variant { WEps, WBar };

/// Profile value with first and second derivative.
struct ProfileValue {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// t (1 - ln t) for n = 2, t^{2/n} otherwise; 0 at t = 0.
double a_lower(int n, double t);

/// t (1/2 - ln t)^{1/2} for n = 2, t^{2/n} otherwise; 0 at t = 0.
double a_upper(int n, double t);

/// |x'|^2/2 - 1 for the trailing coordinates of x.
double b_lateral(const Vec& x);

class BarrierSpec {
 public:
  /// Lower barrier w_eps. eps must lie in (0, 1/2] when n = 2 and is ignored otherwise.
  static BarrierSpec w_eps(int n, double eps);
  /// Upper barrier w_bar.
  static BarrierSpec w_bar(int n);

  int dim() const noexcept { return n_; }
  Variant variant() const noexcept { return variant_; }
  double eps() const noexcept { return eps_; }

  /// Power of the w_eps profile: 2/n - [n==2] eps. Meaningless for w_bar, n = 2.
  double exponent() const noexcept;

  /// a(t), a'(t), a''(t) for t > 0; value 0 at t = 0.
  ProfileValue profile(double t) const;

  /// w(x) on the closed cylinder; throws for points outside it.
  double eval(const Vec& x) const;
  /// Reflected extension onto K_{2,sqrt 2}: w(2 - x_1, x') for x_1 > 1.
  double eval_extended(const Vec& x) const;

  /// Closed-form Hessian (requires x_1 > 0).
  Mat hessian(const Vec& x) const;
  /// Closed-form Hessian determinant (requires x_1 > 0).
  double det_hessian(const Vec& x) const;

 private:
  BarrierSpec(int n, Variant v, double eps) : n_(n), variant_(v), eps_(eps) {}
  void check_interior(const Vec& x) const;

  int n_;
  Variant variant_;
  double eps_;
};

/// Central finite-difference Hessian of spec.eval with step h.
Mat finite_difference_hessian(const BarrierSpec& spec, const Vec& x, double h);

/// |det H_fd - det D^2 w| / |det D^2 w| with central differences of step
/// rel_step * x_1, improved by one Richardson step (h and h/2).
double fd_det_relative_error(const BarrierSpec& spec, const Vec& x, double rel_step = 1e-2);

// --- Convexity certification -------------------------------------------------

struct MinorSample {
  double x1 = 0.0;
  double radius = 0.0;
  /// minors[k] = M_{k+1..n}, the trailing principal minor starting at row k.
  std::vector<double> minors;
};

struct CertGrid {
  int x1_points = 401;
  int radius_points = 201;
  double x1_min = 1e-10;
};

struct ConvexityCert {
  bool convex = false;
  double min_det = 0.0;
  /// Largest deviation of the k >= 2 minors from the closed form a^{n-k+1}.
  double closed_form_error = 0.0;
  std::vector<MinorSample> table;
};

/// Sylvester check of the Hessian on the grid of K_{1,rho}.
ConvexityCert convexity_cert(const BarrierSpec& spec, double rho, const CertGrid& grid = {});

/// Extremes of det D^2 w over the grid of K_{1,rho}.
struct DetRange {
  double min = 0.0;
  double max = 0.0;
  double argmin_x1 = 0.0, argmin_r = 0.0;
  double argmax_x1 = 0.0, argmax_r = 0.0;
};
DetRange det_range(const BarrierSpec& spec, double rho, const CertGrid& grid = {});

/// Upper bound on det D^2 w_bar: 1 for n = 2, (2/n)(1 - 2/n) otherwise.
double upper_det_bound(int n);

/// Pointwise bound -a_bar'' a_bar^{n-1}.
double upper_det_profile(int n, double t);

// --- Constants ---------------------------------------------------------------

struct LemmaConstants {
  double lambda = 0.0;
  double rho = 0.0;
};

/// (eps/4, sqrt(eps/2)) for n = 2. For n >= 3 the radius is the largest
/// rho in the grid {k/1000} keeping the lower determinant bound at least half
/// of its rho -> 0 limit (2/n)(1-2/n).
LemmaConstants lemma_constants(int n, double eps = 0.5);

/// Lower determinant bound (2/n)((1-2/n)(1-rho^2/2) - (2/n) rho^2) for n >= 3.
double lower_det_bound(int n, double rho);

/// eps minimizing sqrt(8) t^{1-eps} / eps, clipped to 1/2 (valid for t <= e^{-2}).
double optimal_eps(double x1);

/// min over eps in (0,1/2] of sqrt(8) t^{1-eps}/eps.
double sharp_bound_n2(double x1);

struct ProfileCheck {
  bool pass = true;
  double min_margin = 0.0;
  Index worst = -1;
  Index checked = 0;
};

/// |v(x)| <= C_n a_lower(x_1) on the square K_{2,1}.
class AmpProfileBound {
 public:
  explicit AmpProfileBound(int n);

  int dim() const noexcept { return n_; }
  double constant() const noexcept { return constant_; }
  double bound(double x1) const;

  /// Checks the bound at every node inside the closed cylinder K_{2,1};
  /// depths beyond 1 are reflected (2 - x_1).
  ProfileCheck check(const std::vector<Vec>& nodes, const std::vector<double>& values,
                     double tolerance = 1e-6) const;

 private:
  int n_;
  double constant_;
};

}  // namespace ma::barriers
