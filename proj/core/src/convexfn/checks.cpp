#include "mongeampere/convexfn/checks.hpp"

#include <algorithm>
#include <cmath>

namespace ma::convexfn {

SubgradientReport subgradient_bound_check(const PLConvexFunction& u, double tol) {
  MeasureOptions mo;
  mo.keep_cells = true;
  MAMeasure m = ma_measure(u, mo);

  std::vector<Index> bnd = u.boundary_indices();
  double b0 = bnd.empty() ? 0.0 : u.value(bnd[0]);
  bool constant = true;
  for (Index b : bnd) constant = constant && std::abs(u.value(b) - b0) <= 1e-14 * (1.0 + std::abs(b0));

  std::vector<double> dist;
  for (Index i : u.interior_indices()) dist.push_back(u.boundary_distance(i));
  std::sort(dist.begin(), dist.end());
  dist.erase(std::unique(dist.begin(), dist.end()), dist.end());
  SubgradientReport rep;
  if (dist.empty()) return rep;
  ModulusCurve base = modulus(u, dist);

  const auto& hs = u.domain().halfspaces();
  rep.worst_margin = std::numeric_limits<double>::infinity();
  for (Index i : u.interior_indices()) {
    const Cell& c = m.cells[i];
    if (c.empty) continue;
    const double d = u.boundary_distance(i);
    const std::size_t k = std::lower_bound(dist.begin(), dist.end(), d) - dist.begin();
    for (const Vec& p : c.vertices) {
      double pn = p.norm();
      double omega = base.omega[k];
      if (pn > 0) {
        // the ray from x_i along p leaves the domain at x_b
        Vec e = p / pn;
        double t = std::numeric_limits<double>::infinity();
        for (const auto& h : hs) {
          double ae = h.normal.dot(e);
          if (ae > 0) t = std::min(t, h.slack(u.node(i)) / ae);
        }
        Vec xb = u.node(i) + t * e;
        double ub = constant ? b0 : evaluate(u, xb);
        omega = std::max(omega, (ub - u.value(i)) * std::min(1.0, d / t));
      }
      double margin = omega / d - pn;
      ++rep.checked;
      if (margin < rep.worst_margin) {
        rep.worst_margin = margin;
        rep.worst_node = i;
      }
    }
  }
  rep.pass = rep.worst_margin >= -tol;
  return rep;
}

SuperadditivityReport superadditivity_check(const PLConvexFunction& u, const PLConvexFunction& v,
                                            double tol) {
  require(u.size() == v.size(), "superadditivity_check: node sets differ");
  for (Index i = 0; i < u.size(); ++i)
    require(u.node(i) == v.node(i) && u.is_boundary(i) == v.is_boundary(i),
            "superadditivity_check: node sets differ");
  SuperadditivityReport rep;
  rep.mass_u = ma_measure(u).mass;
  rep.mass_v = ma_measure(v).mass;
  rep.mass_sum = ma_measure(u.with_values(u.values() + v.values())).mass;
  rep.worst = std::numeric_limits<double>::infinity();
  for (Index i : u.interior_indices()) {
    double gap = rep.mass_sum(i) - rep.mass_u(i) - rep.mass_v(i);
    rep.worst = std::min(rep.worst, gap);
    if (gap < -tol * (1.0 + rep.mass_sum(i))) rep.failures.push_back(i);
  }
  rep.pass = rep.failures.empty();
  return rep;
}

}  // namespace ma::convexfn
