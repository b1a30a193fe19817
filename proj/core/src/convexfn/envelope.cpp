#include "mongeampere/convexfn/envelope.hpp"

#include "cell_builder.hpp"

#include <cmath>

namespace ma::convexfn {

std::vector<char> active_flags(const PLConvexFunction& u, double tol) {
  std::vector<char> flags(u.size(), 1);
  for (Index i = 0; i < u.size(); ++i) {
    double env = envelope_value(u, i);
    flags[i] = u.value(i) - env <= tol * (1.0 + std::abs(u.value(i)));
  }
  return flags;
}

PLConvexFunction convex_envelope(const PLConvexFunction& u) {
  Vec v = u.values();
  for (Index i = 0; i < u.size(); ++i) v(i) = std::min(u.value(i), envelope_value(u, i));
  return u.with_values(std::move(v));
}

PLConvexFunction convex_envelope(const std::vector<Vec>& points, const Vec& values) {
  require(!points.empty(), "convex_envelope: no points");
  require(static_cast<Index>(points.size()) == values.size(), "convex_envelope: value count mismatch");
  const int n = static_cast<int>(points[0].size());
  if (geometry::affine_dimension(points, 1e-12) < n)
    throw DegenerateInput("convex_envelope: points are not affinely spanning");
  auto hull = geometry::ConvexPolytope::from_vertices(points);
  double scale = 1.0;
  for (const auto& v : hull.vertices()) scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
  std::vector<char> boundary(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& h : hull.halfspaces()) s = std::min(s, h.slack(points[i]));
    boundary[i] = s <= 1e-11 * scale;
  }
  PLConvexFunction raw(std::move(hull), points, std::move(boundary), values);
  return convex_envelope(raw);
}

}  // namespace ma::convexfn
