#include "mongeampere/convexfn/pl_function.hpp"

#include "cell_builder.hpp"

#include <cmath>

namespace ma::convexfn {

NodeSet::NodeSet(geometry::ConvexPolytope dom, std::vector<Vec> pts, std::vector<char> is_boundary)
    : domain(std::move(dom)), points(std::move(pts)), boundary(std::move(is_boundary)) {
  require(points.size() == boundary.size(), "node set: flag count mismatch");
  require(!points.empty(), "node set: no nodes");
  double scale = 1.0;
  for (const auto& v : domain.vertices()) scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
  distance.resize(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    require(points[i].size() == domain.dim(), "node set: node dimension mismatch");
    double s = std::numeric_limits<double>::infinity();
    for (const auto& h : domain.halfspaces()) s = std::min(s, h.slack(points[i]));
    if (boundary[i]) {
      if (std::abs(s) > 1e-9 * scale)
        throw InvalidArgument("node set: boundary node " + std::to_string(i) + " is not on the boundary");
      distance[i] = 0.0;
    } else {
      if (!(s > 1e-12 * scale))
        throw InvalidArgument("node set: interior node " + std::to_string(i) + " is not interior");
      distance[i] = s;
    }
  }
}

PLConvexFunction::PLConvexFunction(std::shared_ptr<const NodeSet> nodes, Vec values)
    : nodes_(std::move(nodes)), values_(std::move(values)) {
  require(nodes_ != nullptr, "function: null node set");
  require(values_.size() == static_cast<Index>(nodes_->points.size()), "function: value count mismatch");
  require(values_.allFinite(), "function: non-finite values");
}

PLConvexFunction::PLConvexFunction(geometry::ConvexPolytope domain, std::vector<Vec> points,
                                   std::vector<char> boundary, Vec values)
    : PLConvexFunction(std::make_shared<const NodeSet>(std::move(domain), std::move(points), std::move(boundary)),
                       std::move(values)) {}

std::vector<Index> PLConvexFunction::boundary_indices() const {
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i)
    if (is_boundary(i)) out.push_back(i);
  return out;
}

std::vector<Index> PLConvexFunction::interior_indices() const {
  std::vector<Index> out;
  for (Index i = 0; i < size(); ++i)
    if (!is_boundary(i)) out.push_back(i);
  return out;
}

Cell subgradient_cell(const PLConvexFunction& u, Index i, const CellOptions& opts) {
  require(i >= 0 && i < u.size(), "subgradient_cell: node index out of range");
  detail::BuildRequest req;
  req.x = u.node(i);
  req.value = u.value(i);
  req.self = i;
  req.candidates = opts.candidates ? &(*opts.candidates)[i] : nullptr;
  req.exact = opts.exact;
  req.allow_unbounded = u.is_boundary(i);
  auto raw = detail::build_cell(u.nodes(), u.values(), req);
  Cell c;
  c.empty = raw.empty;
  c.bounded = raw.bounded;
  c.volume = raw.empty ? 0.0 : raw.volume;
  c.vertices = std::move(raw.vertices);
  c.facets = std::move(raw.facets);
  return c;
}

double envelope_value(const PLConvexFunction& u, Index i) {
  require(i >= 0 && i < u.size(), "envelope_value: node index out of range");
  return detail::envelope_by_bisection(u.nodes(), u.values(), u.node(i), i, u.value(i), nullptr);
}

double evaluate(const PLConvexFunction& u, const Vec& x) {
  const auto& dom = u.domain();
  require(x.size() == u.dim(), "evaluate: dimension mismatch");
  double scale = 1.0;
  for (const auto& v : dom.vertices()) scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
  const double tol = 1e-10 * scale;
  require(dom.contains(x, tol), "evaluate: point outside the domain");
  // on the boundary only nodes of the faces through x matter
  std::vector<std::size_t> tight;
  for (std::size_t k = 0; k < dom.halfspaces().size(); ++k)
    if (dom.halfspaces()[k].slack(x) <= tol) tight.push_back(k);
  std::vector<Index> pool;
  for (Index j = 0; j < u.size() && !tight.empty(); ++j) {
    if (!u.is_boundary(j)) continue;
    for (std::size_t k : tight)
      if (dom.halfspaces()[k].slack(u.node(j)) <= tol) {
        pool.push_back(j);
        break;
      }
  }
  auto attempt = [&](const std::vector<Index>* pool_ptr, double& out) {
    double top = -std::numeric_limits<double>::infinity();
    if (pool_ptr) {
      for (Index j : *pool_ptr) top = std::max(top, u.value(j));
    } else {
      top = u.values().maxCoeff();
    }
    double upper = top + 1.0 + std::abs(top);
    out = detail::envelope_by_bisection(u.nodes(), u.values(), x, -1, upper, pool_ptr);
    return out < upper;
  };
  double v = 0.0;
  if (!pool.empty() && attempt(&pool, v)) return v;
  if (attempt(nullptr, v)) return v;
  // rounding can leave a boundary point just outside the hull of the nodes
  Vec inner = x + 1e-12 * (dom.vertex_centroid() - x);
  double top = u.values().maxCoeff();
  double upper = top + 1.0 + std::abs(top);
  v = detail::envelope_by_bisection(u.nodes(), u.values(), inner, -1, upper, nullptr);
  if (v < upper) return v;
  throw InvalidArgument("evaluate: point outside the hull of the nodes");
}

}  // namespace ma::convexfn
