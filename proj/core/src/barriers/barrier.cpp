#include "mongeampere/barriers/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ma::barriers {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;
constexpr double kCylinderSlack = 1e-12;

// t^p with a hard 0 at t = 0.
double power(double t, double p) { return t > 0.0 ? std::exp(p * std::log(t)) : 0.0; }

void check_dim(int n) { require(n >= 2, "barrier dimension must be at least 2"); }

double lateral_norm2(const Vec& x) { return x.tail(x.size() - 1).squaredNorm(); }

}  // namespace

double a_lower(int n, double t) {
  check_dim(n);
  require(t >= 0.0, "a_lower: negative argument");
  if (t == 0.0) return 0.0;
  if (n == 2) return t * (1.0 - std::log(t));
  return power(t, 2.0 / n);
}

double a_upper(int n, double t) {
  check_dim(n);
  require(t >= 0.0, "a_upper: negative argument");
  if (t == 0.0) return 0.0;
  if (n == 2) return t * std::sqrt(0.5 - std::log(t));
  return power(t, 2.0 / n);
}

double b_lateral(const Vec& x) { return 0.5 * lateral_norm2(x) - 1.0; }

BarrierSpec BarrierSpec::w_eps(int n, double eps) {
  check_dim(n);
  if (n == 2) {
    require(eps > 0.0 && eps <= 0.5, "w_eps: eps must lie in (0, 1/2] for n = 2");
    return BarrierSpec(n, Variant::WEps, eps);
  }
  return BarrierSpec(n, Variant::WEps, 0.0);
}

BarrierSpec BarrierSpec::w_bar(int n) {
  check_dim(n);
  return BarrierSpec(n, Variant::WBar, 0.0);
}

double BarrierSpec::exponent() const noexcept {
  return 2.0 / n_ - (n_ == 2 && variant_ == Variant::WEps ? eps_ : 0.0);
}

ProfileValue BarrierSpec::profile(double t) const {
  require(t >= 0.0, "barrier profile: negative depth");
  ProfileValue pv;
  if (t == 0.0) return pv;
  if (variant_ == Variant::WBar && n_ == 2) {
    const double s = 0.5 - std::log(t);
    const double rs = std::sqrt(s);
    pv.value = t * rs;
    pv.d1 = rs - 0.5 / rs;
    pv.d2 = -(0.5 / t) / rs - (0.25 / t) / (s * rs);
    return pv;
  }
  const double g = exponent();
  pv.value = power(t, g);
  pv.d1 = g * pv.value / t;
  pv.d2 = g * (g - 1.0) * pv.value / (t * t);
  return pv;
}

void BarrierSpec::check_interior(const Vec& x) const {
  require(x.size() == n_, "barrier: point has wrong dimension");
  require(x(0) > 0.0, "barrier: Hessian is singular at x_1 = 0");
}

double BarrierSpec::eval(const Vec& x) const {
  require(x.size() == n_, "barrier: point has wrong dimension");
  const double t = x(0);
  const double r2 = lateral_norm2(x);
  if (t < -kCylinderSlack || t > 1.0 + kCylinderSlack || r2 > 2.0 * (1.0 + kCylinderSlack))
    throw InvalidArgument("barrier: point outside the closed cylinder K_{1,sqrt 2}");
  const double a = variant_ == Variant::WEps ? profile(std::clamp(t, 0.0, 1.0)).value
                                             : a_upper(n_, std::clamp(t, 0.0, 1.0));
  return a * (0.5 * r2 - 1.0);
}

double BarrierSpec::eval_extended(const Vec& x) const {
  require(x.size() == n_, "barrier: point has wrong dimension");
  if (x(0) <= 1.0) return eval(x);
  require(x(0) <= 2.0 + kCylinderSlack, "barrier: point beyond the reflected cylinder");
  Vec y = x;
  y(0) = 2.0 - x(0);
  return eval(y);
}

Mat BarrierSpec::hessian(const Vec& x) const {
  check_interior(x);
  const ProfileValue a = profile(x(0));
  const double b = b_lateral(x);
  Mat h = Mat::Zero(n_, n_);
  h(0, 0) = a.d2 * b;
  for (int i = 1; i < n_; ++i) {
    h(0, i) = h(i, 0) = a.d1 * x(i);
    h(i, i) = a.value;
  }
  return h;
}

double BarrierSpec::det_hessian(const Vec& x) const {
  check_interior(x);
  const double t = x(0);
  const double r2 = lateral_norm2(x);
  const double b = 0.5 * r2 - 1.0;
  if (variant_ == Variant::WBar && n_ == 2) {
    // With s = 1/2 - ln t the powers of t cancel exactly.
    const double s = 0.5 - std::log(t);
    const double k = 1.0 - 0.5 / s;
    return -b * (0.5 + 0.25 / s) - r2 * s * k * k;
  }
  // (a''/a b - (a'/a)^2 |x'|^2) a^n = g t^{n g - 2} ((g - 1) b - g |x'|^2)
  const double g = exponent();
  return g * power(t, n_ * g - 2.0) * ((g - 1.0) * b - g * r2);
}

Mat finite_difference_hessian(const BarrierSpec& spec, const Vec& x, double h) {
  const Index n = x.size();
  Mat H(n, n);
  const double f0 = spec.eval(x);
  for (Index i = 0; i < n; ++i) {
    Vec p = x, m = x;
    p(i) += h;
    m(i) -= h;
    H(i, i) = (spec.eval(p) - 2.0 * f0 + spec.eval(m)) / (h * h);
    for (Index j = i + 1; j < n; ++j) {
      Vec pp = x, pm = x, mp = x, mm = x;
      pp(i) += h, pp(j) += h;
      pm(i) += h, pm(j) -= h;
      mp(i) -= h, mp(j) += h;
      mm(i) -= h, mm(j) -= h;
      H(i, j) = H(j, i) =
          (spec.eval(pp) - spec.eval(pm) - spec.eval(mp) + spec.eval(mm)) / (4.0 * h * h);
    }
  }
  return H;
}

double fd_det_relative_error(const BarrierSpec& spec, const Vec& x, double rel_step) {
  require(rel_step > 0.0 && rel_step < 0.5, "fd_det_relative_error: step must lie in (0, 1/2)");
  const double h = rel_step * x(0);
  const Mat coarse = finite_difference_hessian(spec, x, h);
  const Mat fine = finite_difference_hessian(spec, x, 0.5 * h);
  const Mat extrapolated = (4.0 * fine - coarse) / 3.0;
  const double exact = spec.det_hessian(x);
  require(exact != 0.0, "fd_det_relative_error: determinant vanishes");
  return std::abs(extrapolated.determinant() - exact) / std::abs(exact);
}

namespace {

std::vector<double> x1_grid(const CertGrid& grid) {
  require(grid.x1_points >= 2 && grid.x1_min > 0.0 && grid.x1_min < 1.0,
          "certification grid: invalid x_1 range");
  std::vector<double> t(grid.x1_points);
  const double lo = std::log(grid.x1_min);
  for (int k = 0; k < grid.x1_points; ++k)
    t[k] = std::exp(lo * (1.0 - static_cast<double>(k) / (grid.x1_points - 1)));
  t.back() = 1.0;
  return t;
}

std::vector<double> radius_grid(const CertGrid& grid, double rho) {
  require(grid.radius_points >= 2, "certification grid: need at least two radii");
  std::vector<double> r(grid.radius_points);
  for (int k = 0; k < grid.radius_points; ++k)
    r[k] = rho * static_cast<double>(k) / (grid.radius_points - 1);
  return r;
}

Vec grid_point(int n, double t, double r) {
  Vec x = Vec::Zero(n);
  x(0) = t;
  x(1) = r;
  return x;
}

}  // namespace

ConvexityCert convexity_cert(const BarrierSpec& spec, double rho, const CertGrid& grid) {
  require(rho > 0.0 && rho <= kSqrt2 * (1.0 + 1e-15), "convexity_cert: rho must lie in (0, sqrt 2]");
  const int n = spec.dim();
  ConvexityCert cert;
  cert.convex = true;
  cert.min_det = std::numeric_limits<double>::infinity();
  for (double t : x1_grid(grid)) {
    const double a = spec.profile(t).value;
    for (double r : radius_grid(grid, rho)) {
      const Vec x = grid_point(n, t, r);
      const Mat H = spec.hessian(x);
      MinorSample row{t, r, std::vector<double>(n)};
      for (int k = 0; k < n; ++k) {
        const int m = n - k;
        row.minors[k] = k == 0 ? spec.det_hessian(x) : H.bottomRightCorner(m, m).determinant();
        if (k > 0) {
          const double expected = std::pow(a, m);
          cert.closed_form_error =
              std::max(cert.closed_form_error, std::abs(row.minors[k] - expected) / expected);
        }
        if (!(row.minors[k] > 0.0)) cert.convex = false;
      }
      cert.min_det = std::min(cert.min_det, row.minors[0]);
      cert.table.push_back(std::move(row));
    }
  }
  return cert;
}

DetRange det_range(const BarrierSpec& spec, double rho, const CertGrid& grid) {
  require(rho > 0.0 && rho <= kSqrt2 * (1.0 + 1e-15), "det_range: rho must lie in (0, sqrt 2]");
  DetRange out;
  out.min = std::numeric_limits<double>::infinity();
  out.max = -std::numeric_limits<double>::infinity();
  for (double t : x1_grid(grid)) {
    for (double r : radius_grid(grid, rho)) {
      const double d = spec.det_hessian(grid_point(spec.dim(), t, r));
      if (d < out.min) out.min = d, out.argmin_x1 = t, out.argmin_r = r;
      if (d > out.max) out.max = d, out.argmax_x1 = t, out.argmax_r = r;
    }
  }
  return out;
}

double upper_det_bound(int n) {
  check_dim(n);
  return n == 2 ? 1.0 : (2.0 / n) * (1.0 - 2.0 / n);
}

double upper_det_profile(int n, double t) {
  check_dim(n);
  require(t > 0.0, "upper_det_profile: t must be positive");
  if (n == 2) return (1.0 - std::log(t)) / (1.0 - 2.0 * std::log(t));
  return upper_det_bound(n);
}

double lower_det_bound(int n, double rho) {
  require(n >= 3, "lower_det_bound is the n >= 3 formula");
  const double g = 2.0 / n;
  return g * ((1.0 - g) * (1.0 - 0.5 * rho * rho) - g * rho * rho);
}

LemmaConstants lemma_constants(int n, double eps) {
  check_dim(n);
  if (n == 2) {
    require(eps > 0.0 && eps <= 0.5, "lemma_constants: eps must lie in (0, 1/2] for n = 2");
    return {eps / 4.0, std::sqrt(eps / 2.0)};
  }
  const double limit = (2.0 / n) * (1.0 - 2.0 / n);
  LemmaConstants c;
  for (int k = 1; k <= 1414; ++k) {
    const double rho = k / 1000.0;
    const double lam = lower_det_bound(n, rho);
    if (lam < 0.5 * limit) break;
    c = {lam, rho};
  }
  return c;
}

double optimal_eps(double x1) {
  require(x1 > 0.0 && x1 <= 1.0, "optimal_eps: x_1 must lie in (0, 1]");
  if (x1 >= std::exp(-2.0)) return 0.5;
  return -1.0 / std::log(x1);
}

double sharp_bound_n2(double x1) {
  require(x1 >= 0.0 && x1 <= 1.0, "sharp_bound_n2: x_1 must lie in [0, 1]");
  if (x1 == 0.0) return 0.0;
  const double eps = optimal_eps(x1);
  return std::sqrt(8.0) * power(x1, 1.0 - eps) / eps;
}

AmpProfileBound::AmpProfileBound(int n) : n_(n) {
  check_dim(n);
  if (n == 2) {
    constant_ = std::sqrt(8.0) * std::numbers::e;
  } else {
    const LemmaConstants c = lemma_constants(n);
    constant_ = std::pow(c.lambda, -1.0 / n) * std::pow(c.rho, -2.0 * (n - 1) / n);
  }
}

double AmpProfileBound::bound(double x1) const { return constant_ * a_lower(n_, x1); }

ProfileCheck AmpProfileBound::check(const std::vector<Vec>& nodes, const std::vector<double>& values,
                                    double tolerance) const {
  require(nodes.size() == values.size(), "profile check: node/value size mismatch");
  ProfileCheck out;
  out.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Vec& x = nodes[i];
    require(x.size() == n_, "profile check: node has wrong dimension");
    if (x(0) < 0.0 || x(0) > 2.0 || lateral_norm2(x) > 1.0 + 1e-12) continue;
    const double depth = std::min(x(0), 2.0 - x(0));
    const double margin = bound(std::min(depth, 1.0)) - std::abs(values[i]);
    ++out.checked;
    if (margin < out.min_margin) {
      out.min_margin = margin;
      out.worst = static_cast<Index>(i);
    }
  }
  out.pass = out.checked == 0 || out.min_margin >= -tolerance;
  return out;
}

}  // namespace ma::barriers
