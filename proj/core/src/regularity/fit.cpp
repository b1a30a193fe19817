#include "mongeampere/regularity/fit.hpp"

#include <algorithm>
#include <cmath>

namespace ma::regularity {

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  require(x.size() == y.size(), "fit_line: size mismatch");
  const std::size_t m = x.size();
  require(m >= 2, "fit_line: need at least two points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  require(sxx > 0.0, "fit_line: abscissae coincide");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  f.residuals.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    f.residuals[i] = y[i] - f.intercept - f.slope * x[i];
    ssr += f.residuals[i] * f.residuals[i];
  }
  f.rms = std::sqrt(ssr / static_cast<double>(m));
  const double se = m > 2 ? std::sqrt(ssr / static_cast<double>(m - 2) / sxx) : 0.0;
  f.slope_lo = f.slope - 2.0 * se;
  f.slope_hi = f.slope + 2.0 * se;
  return f;
}

HolderFit fit_power(const std::vector<double>& depth, const std::vector<double>& rise, double min_depth,
                    double max_depth, double log_c0, bool log_factor) {
  require(depth.size() == rise.size(), "fit_power: size mismatch");
  require(max_depth > 0.0, "fit_power: max_depth must be positive");
  HolderFit h;
  h.min_depth = min_depth;
  h.max_depth = max_depth;
  std::vector<double> lx, ly, lf;
  for (std::size_t i = 0; i < depth.size(); ++i) {
    DepthSample s{depth[i], rise[i], false};
    s.used = depth[i] > 0.0 && depth[i] >= min_depth * (1.0 - 1e-12) && depth[i] <= max_depth * (1.0 + 1e-12) &&
             std::isfinite(rise[i]) && rise[i] > 0.0;
    if (s.used) {
      lx.push_back(std::log(depth[i]));
      ly.push_back(std::log(rise[i]));
    }
    h.samples.push_back(s);
  }
  h.used = static_cast<int>(lx.size());
  if (h.used < 4)
    throw InvalidArgument("holder_fit: only " + std::to_string(h.used) + " usable depths (need 4)");
  auto line = fit_line(lx, ly);
  h.alpha = line.slope;
  h.alpha_lo = line.slope_lo;
  h.alpha_hi = line.slope_hi;
  h.log_c = line.intercept;
  h.rms = line.rms;
  h.residuals = line.residuals;
  if (log_factor) {
    std::vector<double> fx, fy;
    for (std::size_t k = 0; k < lx.size(); ++k) {
      double g = log_c0 - lx[k];
      if (g <= 0.0) continue;
      fx.push_back(std::log(g));
      fy.push_back(ly[k] - lx[k]);
    }
    if (fx.size() >= 3) {
      auto lfit = fit_line(fx, fy);
      h.log_factor = {true, log_c0, lfit.slope, lfit.slope_lo, lfit.slope_hi, lfit.intercept, lfit.rms};
    }
  }
  return h;
}

double layer_depth(const std::vector<Vec>& nodes, const geometry::Halfspace& face, int skip) {
  if (skip <= 0) return 0.0;
  std::vector<double> s;
  double top = 0.0;
  for (const auto& x : nodes) {
    s.push_back(face.slack(x));
    top = std::max(top, std::abs(s.back()));
  }
  const double tol = 1e-9 * std::max(1.0, top);
  std::sort(s.begin(), s.end());
  int layer = 0;
  double last = 0.0;
  for (double v : s) {
    if (v <= tol || v - last <= tol) continue;
    last = v;
    if (++layer == skip) return v;
  }
  throw InvalidArgument("layer_depth: fewer node layers than requested");
}

HolderFit holder_fit(const geometry::ConvexPolytope& domain, const std::vector<Vec>& nodes, const Evaluator& eval,
                     std::size_t facet, const HolderOptions& opts) {
  require(facet < domain.halfspaces().size(), "holder_fit: facet index out of range");
  require(opts.samples_per_octave >= 1, "holder_fit: samples_per_octave must be positive");
  const auto& face = domain.halfspaces()[facet];
  Vec center = Vec::Zero(domain.dim());
  const auto& fv = domain.facet_vertices(facet);
  for (int v : fv) center += domain.vertices()[v];
  center /= static_cast<double>(fv.size());
  const Vec inward = -face.normal;

  double min_depth = opts.min_depth;
  if (std::isnan(min_depth)) min_depth = layer_depth(nodes, face, opts.skip_layers);

  // extent of the domain along the inward normal from the center
  double extent = std::numeric_limits<double>::infinity();
  for (const auto& h : domain.halfspaces()) {
    double rate = h.normal.dot(inward);
    if (rate > 1e-14) extent = std::min(extent, h.slack(center) / rate);
  }

  const double u0 = eval(center);
  std::vector<double> depth, rise;
  const double step = std::pow(2.0, -1.0 / opts.samples_per_octave);
  for (double t = 1.0; depth.size() < 200; t *= step) {
    if (t < 0.5 * min_depth || t < 1e-14) break;
    if (t > 0.999 * extent) continue;
    depth.push_back(t);
    rise.push_back(std::abs(eval(center + t * inward) - u0));
  }
  std::reverse(depth.begin(), depth.end());
  std::reverse(rise.begin(), rise.end());
  return fit_power(depth, rise, min_depth, opts.max_depth, opts.log_c0, domain.dim() == 2);
}

HolderFit holder_fit(const convexfn::PLConvexFunction& u, std::size_t facet, const HolderOptions& opts) {
  return holder_fit(u.domain(), u.nodes(), [&](const Vec& x) { return convexfn::evaluate(u, x); }, facet, opts);
}

HolderFit holder_fit(const solver::Mesh& mesh, const Vec& values, std::size_t facet, const HolderOptions& opts) {
  require(values.size() == mesh.size(), "holder_fit: value count mismatch");
  return holder_fit(mesh.domain(), mesh.nodes(), [&](const Vec& x) { return mesh.interpolate(values, x); }, facet,
                    opts);
}

LogProbe log_probe(const std::vector<double>& delta, const std::vector<double>& omega, double c0) {
  require(delta.size() == omega.size(), "log_probe: size mismatch");
  LogProbe r;
  std::vector<double> fx, fy;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t i = 0; i < delta.size(); ++i) {
    double d = delta[i], w = omega[i];
    if (!(d > 0.0) || !(w > 0.0) || !std::isfinite(w) || c0 - std::log(d) <= 0.0) continue;
    fx.push_back(std::log(c0 - std::log(d)));
    fy.push_back(std::log(w / d));
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  r.points = static_cast<int>(fx.size());
  if (r.points < 3) {
    r.warnings.push_back("fewer than 3 usable samples");
    return r;
  }
  r.decades = std::log10(hi / lo);
  auto line = fit_line(fx, fy);
  r.s = line.slope;
  r.s_lo = line.slope_lo;
  r.s_hi = line.slope_hi;
  r.log_c = line.intercept;
  r.conclusive = r.decades >= 2.0;
  if (!r.conclusive) r.warnings.push_back("delta range spans less than 2 decades");
  r.consistent = r.conclusive && r.s >= 0.0 && r.s <= 1.2;
  return r;
}

double holder_constant(const convexfn::ModulusCurve& curve, double alpha) {
  require(alpha > 0.0 && alpha <= 1.0, "holder_constant: alpha must lie in (0, 1]");
  double c = 0.0;
  for (std::size_t i = 0; i < curve.delta.size(); ++i)
    if (curve.delta[i] > 0.0) c = std::max(c, curve.omega[i] / std::pow(curve.delta[i], alpha));
  return c;
}

}  // namespace ma::regularity
