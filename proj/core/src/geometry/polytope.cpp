#include "mongeampere/geometry/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace ma::geometry {
namespace {

// Visits every k-subset of {0..m-1} in lexicographic order; stops early when
// the callback returns false.
template <class F>
void for_each_subset(int m, int k, F&& f) {
  if (k > m || k <= 0) return;
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    if (!f(idx)) return;
    int i = k - 1;
    while (i >= 0 && idx[i] == m - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double binomial(int m, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (m - k + i) / i;
  return r;
}

constexpr double kMaxSubsets = 2e6;

struct Enumeration {
  InnerBodyStatus status = InnerBodyStatus::Empty;
  std::vector<Vec> vertices;
  std::vector<Halfspace> facets;
  std::vector<std::vector<int>> facet_vertices;
};

std::vector<Halfspace> normalized(const std::vector<Halfspace>& hs, int n, bool& infeasible) {
  std::vector<Halfspace> out;
  infeasible = false;
  for (const auto& h : hs) {
    require(h.normal.size() == n, "halfspace: dimension mismatch");
    require(h.normal.allFinite() && std::isfinite(h.offset), "halfspace: non-finite entries");
    double len = h.normal.norm();
    if (len <= 1e-300) {
      if (h.offset < 0) infeasible = true;
      continue;
    }
    out.push_back({h.normal / len, h.offset / len});
  }
  return out;
}

Enumeration enumerate_vertices(const std::vector<Halfspace>& input, int n) {
  Enumeration e;
  bool infeasible = false;
  std::vector<Halfspace> hs = normalized(input, n, infeasible);
  if (infeasible) return e;

  double scale = 1.0;
  for (const auto& h : hs) scale = std::max(scale, std::abs(h.offset));
  const int m = static_cast<int>(hs.size());
  // A large box catches unbounded input: a vertex on it means the set is unbounded.
  const double big = 1e6 * scale;
  std::vector<Halfspace> all = hs;
  for (int i = 0; i < n; ++i) {
    Vec a = Vec::Zero(n);
    a(i) = 1.0;
    all.push_back({a, big});
    all.push_back({-a, big});
  }
  const int total = static_cast<int>(all.size());
  if (binomial(total, n) > kMaxSubsets)
    throw InvalidArgument("halfspace system too large for vertex enumeration");

  const double tol = 1e-9 * scale;
  std::vector<Vec> found;
  Mat a(n, n);
  Vec b(n);
  for_each_subset(total, n, [&](const std::vector<int>& s) {
    for (int i = 0; i < n; ++i) {
      a.row(i) = all[s[i]].normal.transpose();
      b(i) = all[s[i]].offset;
    }
    Eigen::FullPivLU<Mat> lu(a);
    lu.setThreshold(1e-12);
    if (lu.rank() < n) return true;
    Vec x = lu.solve(b);
    for (const auto& h : all)
      if (h.slack(x) < -tol * (1.0 + std::abs(h.offset) / scale)) return true;
    for (const auto& v : found)
      if ((v - x).lpNorm<Eigen::Infinity>() <= tol) return true;
    found.push_back(std::move(x));
    return true;
  });
  if (found.empty()) return e;
  for (const auto& v : found)
    for (int k = m; k < total; ++k)
      if (std::abs(all[k].slack(v)) <= tol * big / scale)
        throw DegenerateInput("polytope: halfspaces do not bound a finite region");

  if (affine_dimension(found, 1e-9 * scale) < n) {
    e.status = InnerBodyStatus::MeasureZero;
    e.vertices = std::move(found);
    return e;
  }

  std::vector<std::vector<int>> seen;
  for (int k = 0; k < m; ++k) {
    std::vector<int> on;
    for (int i = 0; i < static_cast<int>(found.size()); ++i)
      if (std::abs(hs[k].slack(found[i])) <= tol) on.push_back(i);
    if (static_cast<int>(on.size()) < n) continue;
    if (std::find(seen.begin(), seen.end(), on) != seen.end()) continue;
    std::vector<Vec> pts;
    for (int i : on) pts.push_back(found[i]);
    if (affine_dimension(pts, 1e-9 * scale) != n - 1) continue;
    seen.push_back(on);
    e.facets.push_back(hs[k]);
    e.facet_vertices.push_back(std::move(on));
  }
  e.status = InnerBodyStatus::Nonempty;
  e.vertices = std::move(found);
  return e;
}

std::vector<Halfspace> hull_facets_2d(const std::vector<Vec>& pts) {
  std::vector<int> order(pts.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return pts[i](0) < pts[j](0) || (pts[i](0) == pts[j](0) && pts[i](1) < pts[j](1));
  });
  auto cross = [&](int o, int a, int b) {
    return (pts[a](0) - pts[o](0)) * (pts[b](1) - pts[o](1)) -
           (pts[a](1) - pts[o](1)) * (pts[b](0) - pts[o](0));
  };
  std::vector<int> hull(2 * order.size());
  int k = 0;
  for (int i : order) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], i) <= 0) --k;
    hull[k++] = i;
  }
  for (int t = static_cast<int>(order.size()) - 2, lo = k + 1; t >= 0; --t) {
    int i = order[t];
    while (k >= lo && cross(hull[k - 2], hull[k - 1], i) <= 0) --k;
    hull[k++] = i;
  }
  hull.resize(k - 1);
  std::vector<Halfspace> out;
  for (int i = 0; i < static_cast<int>(hull.size()); ++i) {
    const Vec& p = pts[hull[i]];
    const Vec& q = pts[hull[(i + 1) % hull.size()]];
    Vec nrm(2);
    nrm << q(1) - p(1), p(0) - q(0);
    nrm.normalize();
    out.push_back({nrm, nrm.dot(p)});
  }
  return out;
}

std::vector<Halfspace> hull_facets_general(const std::vector<Vec>& pts, int n, double tol) {
  std::vector<Halfspace> out;
  const int m = static_cast<int>(pts.size());
  if (binomial(m, n) > kMaxSubsets) throw InvalidArgument("point set too large for hull");
  for_each_subset(m, n, [&](const std::vector<int>& s) {
    Vec normal(n);
    if (n == 1) {
      normal(0) = 1.0;
    } else {
      Mat rows(n - 1, n);
      for (int i = 1; i < n; ++i) rows.row(i - 1) = (pts[s[i]] - pts[s[0]]).transpose();
      Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
      const Vec& sv = svd.singularValues();
      if (sv(sv.size() - 1) <= tol * std::max(1.0, sv(0))) return true;
      normal = svd.matrixV().col(n - 1);
    }
    double off = normal.dot(pts[s[0]]);
    bool below = true, above = true;
    for (const auto& p : pts) {
      double d = normal.dot(p) - off;
      if (d > tol) below = false;
      if (d < -tol) above = false;
    }
    if (!below && !above) return true;
    if (!below) {
      normal = -normal;
      off = -off;
    }
    for (const auto& h : out)
      if ((h.normal - normal).norm() <= 1e-9 && std::abs(h.offset - off) <= tol) return true;
    out.push_back({normal, off});
    return true;
  });
  return out;
}

double volume_recursive(const std::vector<Vec>& pts, const std::vector<std::vector<int>>& facets,
                        int d) {
  if (d == 1) {
    double lo = pts[0](0), hi = pts[0](0);
    for (const auto& p : pts) {
      lo = std::min(lo, p(0));
      hi = std::max(hi, p(0));
    }
    return hi - lo;
  }
  Vec c = Vec::Zero(d);
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());

  double sum = 0.0;
  for (std::size_t f = 0; f < facets.size(); ++f) {
    const auto& face = facets[f];
    const Vec& p0 = pts[face[0]];
    Mat rows(face.size() - 1, d);
    for (std::size_t i = 1; i < face.size(); ++i) rows.row(i - 1) = (pts[face[i]] - p0).transpose();
    Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
    Mat basis = svd.matrixV().leftCols(d - 1);
    Vec normal = svd.matrixV().col(d - 1);
    double h = std::abs(normal.dot(c - p0));

    std::vector<Vec> local;
    local.reserve(face.size());
    for (int i : face) local.push_back(basis.transpose() * (pts[i] - p0));

    std::vector<std::vector<int>> sub;
    if (d - 1 > 1) {
      for (std::size_t g = 0; g < facets.size(); ++g) {
        if (g == f) continue;
        std::vector<int> common;
        std::set_intersection(face.begin(), face.end(), facets[g].begin(), facets[g].end(),
                              std::back_inserter(common));
        if (static_cast<int>(common.size()) < d - 1) continue;
        std::vector<int> loc;
        std::vector<Vec> cp;
        for (int v : common) {
          loc.push_back(static_cast<int>(std::lower_bound(face.begin(), face.end(), v) - face.begin()));
          cp.push_back(pts[v]);
        }
        if (affine_dimension(cp) != d - 2) continue;
        if (std::find(sub.begin(), sub.end(), loc) == sub.end()) sub.push_back(std::move(loc));
      }
    }
    sum += h * volume_recursive(local, sub, d - 1) / d;
  }
  return sum;
}

}  // namespace

int affine_dimension(const std::vector<Vec>& points, double tol) {
  if (points.size() <= 1) return 0;
  const Index n = points[0].size();
  Mat rows(points.size() - 1, n);
  double scale = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    rows.row(i - 1) = (points[i] - points[0]).transpose();
    scale = std::max(scale, rows.row(i - 1).norm());
  }
  if (scale == 0.0) return 0;
  Eigen::JacobiSVD<Mat> svd(rows);
  int r = 0;
  for (Index i = 0; i < svd.singularValues().size(); ++i)
    if (svd.singularValues()(i) > tol * std::max(1.0, scale)) ++r;
  return r;
}

double polytope_volume(const std::vector<Vec>& vertices,
                       const std::vector<std::vector<int>>& facets) {
  require(!vertices.empty(), "polytope_volume: no vertices");
  const int d = static_cast<int>(vertices[0].size());
  Vec c = Vec::Zero(d);
  for (const auto& v : vertices) c += v;
  c /= static_cast<double>(vertices.size());
  std::vector<Vec> shifted;
  shifted.reserve(vertices.size());
  for (const auto& v : vertices) shifted.push_back(v - c);
  std::vector<std::vector<int>> sorted = facets;
  for (auto& f : sorted) std::sort(f.begin(), f.end());
  return volume_recursive(shifted, sorted, d);
}

ConvexPolytope ConvexPolytope::from_halfspaces(const std::vector<Halfspace>& halfspaces) {
  require(!halfspaces.empty(), "polytope: no halfspaces");
  const int n = static_cast<int>(halfspaces[0].normal.size());
  require(n >= 1, "polytope: dimension must be positive");
  Enumeration e = enumerate_vertices(halfspaces, n);
  if (e.status == InnerBodyStatus::Empty) throw DegenerateInput("polytope: empty intersection");
  if (e.status == InnerBodyStatus::MeasureZero)
    throw DegenerateInput("polytope: intersection is lower dimensional");
  ConvexPolytope p;
  p.dim_ = n;
  p.vertices_ = std::move(e.vertices);
  p.halfspaces_ = std::move(e.facets);
  p.facet_vertices_ = std::move(e.facet_vertices);
  return p;
}

ConvexPolytope ConvexPolytope::from_vertices(const std::vector<Vec>& points) {
  require(!points.empty(), "polytope: no points");
  const int n = static_cast<int>(points[0].size());
  require(n >= 1, "polytope: dimension must be positive");
  double scale = 1.0;
  for (const auto& p : points) {
    require(p.size() == n, "polytope: point dimension mismatch");
    require(p.allFinite(), "polytope: non-finite point");
    scale = std::max(scale, p.lpNorm<Eigen::Infinity>());
  }
  if (affine_dimension(points, 1e-12) < n)
    throw DegenerateInput("polytope: points are not full dimensional");
  std::vector<Halfspace> facets =
      n == 2 ? hull_facets_2d(points) : hull_facets_general(points, n, 1e-10 * scale);
  return from_halfspaces(facets);
}

ConvexPolytope ConvexPolytope::from_both(const std::vector<Vec>& vertices,
                                         const std::vector<Halfspace>& halfspaces) {
  ConvexPolytope p = from_halfspaces(halfspaces);
  double scale = 1.0;
  for (const auto& v : p.vertices_) scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
  bool same = vertices.size() == p.vertices_.size();
  for (std::size_t i = 0; same && i < vertices.size(); ++i) {
    bool hit = false;
    for (const auto& w : p.vertices_)
      if (w.size() == vertices[i].size() && (w - vertices[i]).lpNorm<Eigen::Infinity>() <= 1e-9 * scale)
        hit = true;
    same = hit;
  }
  if (!same) throw InvalidArgument("polytope: vertex and halfspace representations disagree");
  return p;
}

ConvexPolytope ConvexPolytope::box(const Vec& lo, const Vec& hi) {
  require(lo.size() == hi.size() && lo.size() > 0, "box: dimension mismatch");
  std::vector<Halfspace> hs;
  for (Index i = 0; i < lo.size(); ++i) {
    require(lo(i) < hi(i), "box: empty side");
    Vec e = Vec::Zero(lo.size());
    e(i) = 1.0;
    hs.push_back({e, hi(i)});
    hs.push_back({-e, -lo(i)});
  }
  return from_halfspaces(hs);
}

ConvexPolytope ConvexPolytope::unit_cube(int n) { return box(Vec::Zero(n), Vec::Ones(n)); }

ConvexPolytope ConvexPolytope::regular_polygon(int sides, double radius) {
  require(sides >= 3 && radius > 0, "regular_polygon: need >= 3 sides and positive radius");
  std::vector<Vec> pts;
  for (int k = 0; k < sides; ++k) {
    double t = 2.0 * std::numbers::pi * k / sides;
    Vec v(2);
    v << radius * std::cos(t), radius * std::sin(t);
    pts.push_back(v);
  }
  return from_vertices(pts);
}

double ConvexPolytope::volume() const { return polytope_volume(vertices_, facet_vertices_); }

double ConvexPolytope::facet_area(std::size_t k) const {
  const auto& face = facet_vertices_.at(k);
  if (dim_ == 1) return 1.0;
  std::vector<Vec> pts;
  const Vec& p0 = vertices_[face[0]];
  Mat basis;
  {
    Mat rows(face.size() - 1, dim_);
    for (std::size_t i = 1; i < face.size(); ++i) rows.row(i - 1) = (vertices_[face[i]] - p0).transpose();
    Eigen::JacobiSVD<Mat> svd(rows, Eigen::ComputeFullV);
    basis = svd.matrixV().leftCols(dim_ - 1);
  }
  for (int i : face) pts.push_back(basis.transpose() * (vertices_[i] - p0));
  if (dim_ - 1 == 1) return volume_recursive(pts, {}, 1);
  std::vector<std::vector<int>> sub;
  for (std::size_t g = 0; g < facet_vertices_.size(); ++g) {
    if (g == k) continue;
    std::vector<int> common;
    std::set_intersection(face.begin(), face.end(), facet_vertices_[g].begin(),
                          facet_vertices_[g].end(), std::back_inserter(common));
    if (static_cast<int>(common.size()) < dim_ - 1) continue;
    std::vector<Vec> cp;
    std::vector<int> loc;
    for (int v : common) {
      cp.push_back(vertices_[v]);
      loc.push_back(static_cast<int>(std::lower_bound(face.begin(), face.end(), v) - face.begin()));
    }
    if (affine_dimension(cp) != dim_ - 2) continue;
    if (std::find(sub.begin(), sub.end(), loc) == sub.end()) sub.push_back(loc);
  }
  return polytope_volume(pts, sub);
}

double ConvexPolytope::surface_area() const {
  double s = 0.0;
  for (std::size_t k = 0; k < halfspaces_.size(); ++k) s += facet_area(k);
  return s;
}

Vec ConvexPolytope::vertex_centroid() const {
  Vec c = Vec::Zero(dim_);
  for (const auto& v : vertices_) c += v;
  return c / static_cast<double>(vertices_.size());
}

double ConvexPolytope::enclosing_radius(const Vec& center) const {
  double r = 0.0;
  for (const auto& v : vertices_) r = std::max(r, (v - center).norm());
  return r;
}

bool ConvexPolytope::contains(const Vec& x, double tol) const {
  for (const auto& h : halfspaces_)
    if (h.slack(x) < -tol) return false;
  return true;
}

double ConvexPolytope::signed_boundary_distance(const Vec& x) const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& h : halfspaces_) m = std::min(m, h.slack(x));
  if (m >= 0) return m;
  return -(x - project(x, *this)).norm();
}

ConvexPolytope ConvexPolytope::transformed(const AffineMap& map) const {
  require(map.dim() == dim_, "transformed: dimension mismatch");
  Mat inv_t = map.linear().inverse().transpose();
  ConvexPolytope q;
  q.dim_ = dim_;
  q.facet_vertices_ = facet_vertices_;
  for (const auto& v : vertices_) q.vertices_.push_back(map.apply(v));
  for (const auto& h : halfspaces_) {
    Vec a = inv_t * h.normal;
    double b = h.offset + a.dot(map.offset());
    double len = a.norm();
    q.halfspaces_.push_back({a / len, b / len});
  }
  return q;
}

double ConvexPolytope::consistency_defect() const {
  double worst = 0.0;
  for (const auto& v : vertices_)
    for (const auto& h : halfspaces_) worst = std::max(worst, -h.slack(v) / (1.0 + std::abs(h.offset)));
  return worst;
}

InnerBody inner_body(const ConvexPolytope& p, double h) {
  require(h >= 0 && std::isfinite(h), "inner_body: h must be finite and nonnegative");
  std::vector<Halfspace> hs = p.halfspaces();
  for (auto& s : hs) s.offset -= h;
  Enumeration e = enumerate_vertices(hs, p.dim());
  InnerBody out;
  out.status = e.status;
  if (e.status == InnerBodyStatus::Nonempty) out.body = ConvexPolytope::from_halfspaces(hs);
  return out;
}

Vec nearest_boundary_point(const Vec& x, const ConvexPolytope& p) {
  require(x.size() == p.dim(), "nearest_boundary_point: dimension mismatch");
  const auto& hs = p.halfspaces();
  std::size_t best = 0;
  for (std::size_t k = 1; k < hs.size(); ++k)
    if (hs[k].slack(x) < hs[best].slack(x)) best = k;
  double s = hs[best].slack(x);
  if (s < 0) return project(x, p);
  return x + s * hs[best].normal;
}

Vec project(const Vec& x, const ConvexPolytope& p) {
  require(x.size() == p.dim(), "project: dimension mismatch");
  if (p.contains(x, 0.0)) return x;
  const auto& hs = p.halfspaces();
  const int m = static_cast<int>(hs.size());
  const int n = p.dim();
  double scale = 1.0 + x.lpNorm<Eigen::Infinity>();
  for (const auto& v : p.vertices()) scale = std::max(scale, 1.0 + v.lpNorm<Eigen::Infinity>());
  const double tol = 1e-13 * scale;

  Vec y = p.vertex_centroid();
  std::vector<int> work;
  for (int it = 0; it < 50 * (m + n); ++it) {
    Vec g = y - x;
    Vec step = -g;
    Vec lambda;
    if (!work.empty()) {
      Mat a(work.size(), n);
      for (std::size_t i = 0; i < work.size(); ++i) a.row(i) = hs[work[i]].normal.transpose();
      Mat gram = a * a.transpose();
      lambda = -gram.ldlt().solve(a * g);
      step = -g - a.transpose() * lambda;
    }
    if (step.norm() <= tol) {
      int worst = -1;
      double most = -1e-14;
      for (int i = 0; i < lambda.size(); ++i)
        if (lambda(i) < most) {
          most = lambda(i);
          worst = i;
        }
      if (worst < 0) return y;
      work.erase(work.begin() + worst);
      continue;
    }
    double alpha = 1.0;
    int block = -1;
    for (int k = 0; k < m; ++k) {
      if (std::find(work.begin(), work.end(), k) != work.end()) continue;
      double ap = hs[k].normal.dot(step);
      if (ap <= 1e-300) continue;
      double t = std::max(0.0, hs[k].slack(y)) / ap;
      if (t < alpha) {
        alpha = t;
        block = k;
      }
    }
    y += alpha * step;
    if (block >= 0) work.push_back(block);
  }
  throw ConvergenceError("project: active set iteration did not terminate", 0.0, 50 * (m + n));
}

double layer_volume(const ConvexPolytope& p, double a, double b) {
  require(a >= 0 && a < b, "layer_volume: need 0 <= a < b");
  auto vol = [&](double h) {
    InnerBody ib = inner_body(p, h);
    return ib.empty() ? 0.0 : ib.body->volume();
  };
  return vol(a) - vol(b);
}

double sphere_area(int n) {
  require(n >= 1, "sphere_area: n must be positive");
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

double layer_volume_bound(int n, double radius, double a, double b) {
  return sphere_area(n) * std::pow(radius, n - 1) * (b - a);
}

}  // namespace ma::geometry
