#include "mongeampere/regularity/sobolev.hpp"

#include <cmath>

namespace ma::regularity {

Vec simplex_gradient(const solver::Mesh& mesh, const Vec& values, Index s) {
  const int n = mesh.dim();
  const Index* id = mesh.simplex(s);
  Mat E(n, n);
  Vec d(n);
  for (int k = 0; k < n; ++k) {
    E.row(k) = (mesh.nodes()[id[k + 1]] - mesh.nodes()[id[0]]).transpose();
    d(k) = values(id[k + 1]) - values(id[0]);
  }
  return E.partialPivLu().solve(d);
}

double gradient_integral(const solver::Mesh& mesh, const Vec& values, double p, double beta) {
  require(values.size() == mesh.size(), "gradient_integral: value count mismatch");
  require(p >= 0.0, "gradient_integral: p must be nonnegative");
  double sum = 0.0;
  for (Index s = 0; s < mesh.simplex_count(); ++s) {
    double w = std::pow(simplex_gradient(mesh, values, s).norm(), p) * mesh.simplex_volume(s);
    if (beta != 0.0) w *= std::pow(mesh.domain().signed_boundary_distance(mesh.simplex_centroid(s)), beta);
    sum += w;
  }
  return sum;
}

double max_gradient(const solver::Mesh& mesh, const Vec& values) {
  require(values.size() == mesh.size(), "max_gradient: value count mismatch");
  double m = 0.0;
  for (Index s = 0; s < mesh.simplex_count(); ++s) m = std::max(m, simplex_gradient(mesh, values, s).norm());
  return m;
}

namespace {

double inradius(const geometry::ConvexPolytope& p) {
  double lo = 0.0, hi = p.enclosing_radius(p.vertex_centroid());
  for (int it = 0; it < 60; ++it) {
    double mid = 0.5 * (lo + hi);
    (geometry::inner_body(p, mid).empty() ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

SobolevCheck sobolev_integral(const solver::Mesh& mesh, const Vec& values, double p, double beta, double alpha,
                              double holder_constant) {
  require(alpha > 0.0 && alpha <= 1.0, "sobolev_integral: alpha must lie in (0, 1]");
  require(p >= 0.0, "sobolev_integral: p must be nonnegative");
  SobolevCheck c;
  c.p = p;
  c.beta = beta;
  c.alpha = alpha;
  c.q = (1.0 - alpha) * p - beta;
  if (c.q >= 1.0)
    throw InvalidArgument("sobolev_integral: q = " + std::to_string(c.q) +
                          " >= 1, the integral need not be finite; use divergence_check");
  const auto& dom = mesh.domain();
  const int n = mesh.dim();
  c.holder_constant = holder_constant;
  c.R = dom.enclosing_radius(dom.vertex_centroid());
  c.r = inradius(dom);
  c.value = gradient_integral(mesh, values, p, beta);
  c.bound = geometry::sphere_area(n) * std::pow(c.R, n - 1) * std::pow(holder_constant, p) *
            std::pow(c.r, 1.0 - c.q) / (1.0 - c.q);
  c.within = c.value <= c.bound;
  return c;
}

LevelNorm level_norm(const solver::Mesh& mesh, const Vec& values, double p) {
  LevelNorm l;
  l.nodes = mesh.size();
  l.first_layer = mesh.min_interior_distance();
  l.value = gradient_integral(mesh, values, p);
  l.max_gradient = max_gradient(mesh, values);
  return l;
}

DivergenceReport divergence_check(const std::vector<LevelNorm>& levels, double p, double factor) {
  if (levels.size() < 3)
    throw InvalidArgument("divergence_check: need at least 3 refinement levels, got " +
                          std::to_string(levels.size()));
  DivergenceReport r;
  r.p = p;
  r.factor = factor;
  r.levels = levels;
  r.growing = true;
  r.max_gradient_growing = true;
  for (std::size_t k = 1; k < levels.size(); ++k) {
    require(levels[k - 1].value > 0.0 && levels[k - 1].max_gradient > 0.0,
            "divergence_check: nonpositive level norm");
    r.ratios.push_back(levels[k].value / levels[k - 1].value);
    r.max_gradient_ratios.push_back(levels[k].max_gradient / levels[k - 1].max_gradient);
    if (!(r.ratios.back() >= factor)) r.growing = false;
    if (!(r.max_gradient_ratios.back() >= factor)) r.max_gradient_growing = false;
  }
  r.last_ratio = r.ratios.back();
  return r;
}

}  // namespace ma::regularity
