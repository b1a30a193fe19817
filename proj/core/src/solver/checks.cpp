#include "mongeampere/solver/checks.hpp"

#include <cmath>

namespace ma::solver {

double normalized_scale(const geometry::AffineMap& map) {
  return std::pow(std::abs(map.det()), 2.0 / map.dim());
}

MAProblem transformed_problem(const MAProblem& p, const geometry::AffineMap& map, double c) {
  require(map.dim() == p.dim(), "transformed_problem: dimension mismatch");
  require(c > 0, "transformed_problem: scale must be positive");
  const int n = p.dim();
  const double factor = std::pow(c, n) / (map.det() * map.det());
  geometry::AffineMap inv = map.inverse();
  MAProblem q;
  q.mesh = std::make_shared<const Mesh>(p.mesh->transformed(map));
  q.f = [f = p.f, inv, factor](const Vec& y) { return factor * f(inv.apply(y)); };
  q.g = c * p.g;
  q.Lambda = factor * p.Lambda;
  if (p.lambda) q.lambda = factor * *p.lambda;
  return q;
}

EquivarianceReport affine_equivariance_check(const MAProblem& p, const geometry::AffineMap& map, double c,
                                             const SolveOptions& opts) {
  SolveReport first = solve(p, opts);
  SolveReport second = solve(transformed_problem(p, map, c), opts);
  EquivarianceReport rep{false, c, 0.0, 0.0, -1, std::move(first), std::move(second)};
  const Vec& u = rep.original.solution.values();
  const Vec& w = rep.transformed.solution.values();
  double top = 1.0;
  for (Index i = 0; i < u.size(); ++i) {
    top = std::max(top, std::abs(c * u(i)));
    double d = std::abs(w(i) - c * u(i));
    if (d > rep.max_difference || rep.worst_node < 0) {
      rep.max_difference = d;
      rep.worst_node = i;
    }
  }
  rep.threshold = 2.0 * opts.tol * top;
  rep.pass = rep.max_difference <= rep.threshold;
  return rep;
}

ComparisonReport comparison_check(const convexfn::PLConvexFunction& u, const convexfn::PLConvexFunction& v,
                                  double tol, const Vec* mass_u, const Vec* mass_v) {
  require(u.size() == v.size() && u.dim() == v.dim(), "comparison_check: node sets differ");
  for (Index i = 0; i < u.size(); ++i)
    require(u.is_boundary(i) == v.is_boundary(i) && (u.node(i) - v.node(i)).norm() <= 1e-12 * (1.0 + u.node(i).norm()),
            "comparison_check: node sets differ");
  Vec mu = mass_u ? *mass_u : convexfn::ma_measure(u).mass;
  Vec mv = mass_v ? *mass_v : convexfn::ma_measure(v).mass;
  ComparisonReport rep;
  rep.worst_boundary = -std::numeric_limits<double>::infinity();
  rep.worst_mass = -std::numeric_limits<double>::infinity();
  rep.worst_gap = -std::numeric_limits<double>::infinity();
  const double mass_scale = std::max(mu.cwiseAbs().maxCoeff(), mv.cwiseAbs().maxCoeff());
  const double value_scale = std::max({1.0, u.values().cwiseAbs().maxCoeff(), v.values().cwiseAbs().maxCoeff()});
  for (Index i = 0; i < u.size(); ++i) {
    double gap = u.value(i) - v.value(i);
    if (gap > rep.worst_gap) {
      rep.worst_gap = gap;
      rep.worst_node = i;
    }
    if (u.is_boundary(i)) {
      rep.worst_boundary = std::max(rep.worst_boundary, gap);
    } else {
      rep.worst_mass = std::max(rep.worst_mass, mv(i) - mu(i));
    }
    if (gap > tol * value_scale) rep.violations.push_back(i);
  }
  rep.boundary_ok = rep.worst_boundary <= 1e-12 * value_scale;
  rep.mass_ok = !(rep.worst_mass > tol * mass_scale);
  rep.preconditions_ok = rep.boundary_ok && rep.mass_ok;
  rep.conclusion_ok = rep.violations.empty();
  rep.pass = rep.preconditions_ok && rep.conclusion_ok;
  return rep;
}

}  // namespace ma::solver
