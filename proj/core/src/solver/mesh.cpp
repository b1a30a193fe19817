#include "mongeampere/solver/mesh.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace ma::solver {
namespace {

void check_axis(double lo, double hi, int cells) {
  require(lo < hi && cells >= 1, "axis: need lo < hi and at least one cell");
}

double factorial(int n) {
  double f = 1;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// Bowyer-Watson Delaunay triangulation; returns triangles as index triples.
std::vector<std::array<Index, 3>> delaunay(const std::vector<Vec>& pts) {
  using P = Eigen::Vector2d;
  std::vector<P> p;
  P lo(1e300, 1e300), hi(-1e300, -1e300);
  for (const auto& x : pts) {
    p.emplace_back(x(0), x(1));
    lo = lo.cwiseMin(p.back());
    hi = hi.cwiseMax(p.back());
  }
  const Index n = static_cast<Index>(p.size());
  P c = 0.5 * (lo + hi);
  double span = std::max(hi(0) - lo(0), hi(1) - lo(1));
  p.emplace_back(c(0) - 20 * span, c(1) - 10 * span);
  p.emplace_back(c(0) + 20 * span, c(1) - 10 * span);
  p.emplace_back(c(0), c(1) + 20 * span);

  struct Tri {
    std::array<Index, 3> v;
    P center;
    double r2;
  };
  auto make = [&](Index a, Index b, Index d) {
    const P& A = p[a];
    const P& B = p[b];
    const P& C = p[d];
    double orient = (B - A).x() * (C - A).y() - (B - A).y() * (C - A).x();
    if (orient < 0) std::swap(b, d);
    const P& B2 = p[b];
    const P& C2 = p[d];
    P bb = B2 - A, cc = C2 - A;
    double den = 2 * (bb.x() * cc.y() - bb.y() * cc.x());
    P ctr(cc.y() * bb.squaredNorm() - bb.y() * cc.squaredNorm(), bb.x() * cc.squaredNorm() - cc.x() * bb.squaredNorm());
    ctr /= den;
    return Tri{{a, b, d}, A + ctr, ctr.squaredNorm()};
  };
  std::vector<Tri> tris{make(n, n + 1, n + 2)};
  for (Index i = 0; i < n; ++i) {
    std::map<std::pair<Index, Index>, int> edges;
    std::vector<Tri> keep;
    keep.reserve(tris.size() + 4);
    for (const auto& t : tris) {
      if ((p[i] - t.center).squaredNorm() < t.r2 * (1 - 1e-12)) {
        for (int k = 0; k < 3; ++k) {
          Index a = t.v[k], b = t.v[(k + 1) % 3];
          ++edges[{std::min(a, b), std::max(a, b)}];
        }
      } else {
        keep.push_back(t);
      }
    }
    for (const auto& [e, count] : edges)
      if (count == 1) keep.push_back(make(e.first, e.second, i));
    tris = std::move(keep);
  }
  std::vector<std::array<Index, 3>> out;
  for (const auto& t : tris)
    if (t.v[0] < n && t.v[1] < n && t.v[2] < n) {
      const P& A = p[t.v[0]];
      double area = 0.5 * std::abs((p[t.v[1]] - A).x() * (p[t.v[2]] - A).y() - (p[t.v[1]] - A).y() * (p[t.v[2]] - A).x());
      if (area > 1e-14 * span * span) out.push_back(t.v);
    }
  return out;
}

}  // namespace

std::vector<double> uniform_axis(double lo, double hi, int cells) {
  check_axis(lo, hi, cells);
  std::vector<double> t(cells + 1);
  for (int k = 0; k <= cells; ++k) t[k] = lo + (hi - lo) * k / cells;
  t.back() = hi;
  return t;
}

std::vector<double> power_axis(double lo, double hi, int cells, double exponent) {
  check_axis(lo, hi, cells);
  require(exponent >= 1.0, "power_axis: exponent must be >= 1");
  std::vector<double> t(cells + 1);
  for (int k = 0; k <= cells; ++k) t[k] = lo + (hi - lo) * std::pow(static_cast<double>(k) / cells, exponent);
  t.back() = hi;
  return t;
}

std::vector<double> geometric_axis(double lo, double hi, int cells, double first) {
  check_axis(lo, hi, cells);
  const double len = hi - lo;
  require(first > 0 && first * cells < len, "geometric_axis: first step too large for a growing grid");
  // first (r^m - 1)/(r - 1) = len, solved for r > 1 by bisection
  auto total = [&](double r) { return first * (std::pow(r, cells) - 1.0) / (r - 1.0); };
  double a = 1.0 + 1e-15, b = 2.0;
  while (total(b) < len) b *= 2.0;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (a + b);
    (total(mid) < len ? a : b) = mid;
  }
  double r = 0.5 * (a + b);
  std::vector<double> t(cells + 1);
  t[0] = lo;
  double step = first;
  for (int k = 1; k <= cells; ++k) {
    t[k] = t[k - 1] + step;
    step *= r;
  }
  t.back() = hi;
  return t;
}

std::vector<double> chebyshev_axis(double lo, double hi, int cells) {
  check_axis(lo, hi, cells);
  std::vector<double> t(cells + 1);
  for (int k = 0; k <= cells; ++k) t[k] = lo + (hi - lo) * 0.5 * (1.0 - std::cos(std::numbers::pi * k / cells));
  t.front() = lo;
  t.back() = hi;
  return t;
}

Mesh::Mesh(geometry::ConvexPolytope domain, std::vector<Vec> nodes, std::vector<Index> simplices)
    : domain_(std::move(domain)), nodes_(std::move(nodes)), simplices_(std::move(simplices)) {
  finish();
}

void Mesh::finish() {
  const int n = dim();
  double scale = 1.0;
  for (const auto& v : domain_.vertices()) scale = std::max(scale, v.lpNorm<Eigen::Infinity>());
  boundary_.assign(nodes_.size(), 0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& h : domain_.halfspaces()) s = std::min(s, h.slack(nodes_[i]));
    require(s >= -1e-9 * scale, "mesh: node outside the domain");
    boundary_[i] = s <= 1e-11 * scale;
  }
  neighbours_.assign(nodes_.size(), {});
  for (Index s = 0; s < simplex_count(); ++s) {
    const Index* v = simplex(s);
    for (int a = 0; a <= n; ++a)
      for (int b = 0; b <= n; ++b)
        if (a != b) neighbours_[v[a]].push_back(v[b]);
  }
  for (auto& nb : neighbours_) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }

  // bucket grid over simplex bounding boxes
  Vec lo = nodes_[0], hi = nodes_[0];
  for (const auto& x : nodes_) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  bucket_lo_ = lo;
  bucket_width_ = (hi - lo).cwiseMax(1e-300);
  const double per_axis = std::max(1.0, std::pow(static_cast<double>(simplex_count()) / 4.0, 1.0 / n));
  bucket_dims_.assign(n, std::max(1L, static_cast<long>(per_axis)));
  long total = 1;
  for (long d : bucket_dims_) total *= d;
  buckets_.assign(total, {});
  for (Index s = 0; s < simplex_count(); ++s) {
    Vec smin = nodes_[simplex(s)[0]], smax = smin;
    for (int k = 1; k <= n; ++k) {
      smin = smin.cwiseMin(nodes_[simplex(s)[k]]);
      smax = smax.cwiseMax(nodes_[simplex(s)[k]]);
    }
    std::vector<long> a(n), b(n), c(n);
    for (int k = 0; k < n; ++k) {
      a[k] = std::clamp(static_cast<long>((smin(k) - lo(k)) / bucket_width_(k) * bucket_dims_[k]), 0L, bucket_dims_[k] - 1);
      b[k] = std::clamp(static_cast<long>((smax(k) - lo(k)) / bucket_width_(k) * bucket_dims_[k]), 0L, bucket_dims_[k] - 1);
    }
    c = a;
    while (true) {
      long id = 0;
      for (int k = n - 1; k >= 0; --k) id = id * bucket_dims_[k] + c[k];
      buckets_[id].push_back(s);
      int k = 0;
      while (k < n && ++c[k] > b[k]) c[k] = a[k], ++k;
      if (k == n) break;
    }
  }
}

Mesh Mesh::tensor(const std::vector<std::vector<double>>& axes) {
  const int n = static_cast<int>(axes.size());
  require(n >= 1, "tensor mesh: no axes");
  Vec lo(n), hi(n);
  std::vector<int> m(n);
  for (int k = 0; k < n; ++k) {
    require(axes[k].size() >= 2, "tensor mesh: each axis needs two points");
    for (std::size_t i = 1; i < axes[k].size(); ++i)
      require(axes[k][i] > axes[k][i - 1], "tensor mesh: axis coordinates must increase");
    lo(k) = axes[k].front();
    hi(k) = axes[k].back();
    m[k] = static_cast<int>(axes[k].size());
  }
  std::vector<Vec> nodes;
  std::vector<long> stride(n, 1);
  for (int k = 1; k < n; ++k) stride[k] = stride[k - 1] * m[k - 1];
  long count = stride[n - 1] * m[n - 1];
  nodes.reserve(count);
  for (long id = 0; id < count; ++id) {
    Vec x(n);
    long r = id;
    for (int k = 0; k < n; ++k) {
      x(k) = axes[k][r % m[k]];
      r /= m[k];
    }
    nodes.push_back(x);
  }
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do perms.push_back(perm);
  while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<Index> simplices;
  std::vector<int> cell(n, 0);
  while (true) {
    long base = 0;
    for (int k = 0; k < n; ++k) base += cell[k] * stride[k];
    for (const auto& p : perms) {
      long v = base;
      simplices.push_back(v);
      for (int k = 0; k < n; ++k) {
        v += stride[p[k]];
        simplices.push_back(v);
      }
    }
    int k = 0;
    while (k < n && ++cell[k] == m[k] - 1) cell[k++] = 0;
    if (k == n) break;
  }
  return Mesh(geometry::ConvexPolytope::box(lo, hi), std::move(nodes), std::move(simplices));
}

Mesh Mesh::polygon(const geometry::ConvexPolytope& poly, double h) {
  require(poly.dim() == 2, "polygon mesh: domain must be two dimensional");
  require(h > 0, "polygon mesh: spacing must be positive");
  std::vector<Vec> pts = poly.vertices();
  for (std::size_t k = 0; k < poly.halfspaces().size(); ++k) {
    const auto& f = poly.facet_vertices(k);
    const Vec& a = poly.vertices()[f[0]];
    const Vec& b = poly.vertices()[f[1]];
    int pieces = std::max(1, static_cast<int>(std::ceil((b - a).norm() / h)));
    for (int i = 1; i < pieces; ++i) pts.push_back(a + (b - a) * (static_cast<double>(i) / pieces));
  }
  Vec lo = pts[0], hi = pts[0];
  for (const auto& x : poly.vertices()) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  const double dy = h * std::sqrt(3.0) / 2.0;
  int row = 0;
  for (double y = lo(1) + 0.5 * dy; y < hi(1); y += dy, ++row) {
    for (double x = lo(0) + (row % 2 ? 0.5 * h : 0.0); x < hi(0); x += h) {
      Vec q(2);
      q << x, y;
      double s = std::numeric_limits<double>::infinity();
      for (const auto& hs : poly.halfspaces()) s = std::min(s, hs.slack(q));
      if (s >= 0.5 * h) pts.push_back(q);
    }
  }
  auto tris = delaunay(pts);
  std::vector<Index> simplices;
  for (const auto& t : tris) simplices.insert(simplices.end(), t.begin(), t.end());
  Mesh mesh(poly, std::move(pts), std::move(simplices));
  double defect = std::abs(mesh.coverage_defect());
  if (defect > 1e-9 * poly.volume()) throw Error("polygon mesh: triangulation does not cover the domain");
  return mesh;
}

double Mesh::simplex_volume(Index s) const {
  const int n = dim();
  const Index* v = simplex(s);
  Mat e(n, n);
  for (int k = 0; k < n; ++k) e.col(k) = nodes_[v[k + 1]] - nodes_[v[0]];
  return std::abs(e.determinant()) / factorial(n);
}

Vec Mesh::simplex_centroid(Index s) const {
  const int n = dim();
  Vec c = Vec::Zero(n);
  for (int k = 0; k <= n; ++k) c += nodes_[simplex(s)[k]];
  return c / (n + 1.0);
}

double Mesh::min_interior_distance() const {
  double d = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < size(); ++i) {
    if (boundary_[i]) continue;
    for (const auto& h : domain_.halfspaces()) d = std::min(d, h.slack(nodes_[i]));
  }
  return d;
}

double Mesh::max_edge() const {
  double e = 0.0;
  for (Index i = 0; i < size(); ++i)
    for (Index j : neighbours_[i]) e = std::max(e, (nodes_[i] - nodes_[j]).norm());
  return e;
}

Mesh Mesh::transformed(const geometry::AffineMap& map) const {
  std::vector<Vec> pts;
  pts.reserve(nodes_.size());
  for (const auto& x : nodes_) pts.push_back(map.apply(x));
  return Mesh(domain_.transformed(map), std::move(pts), simplices_);
}

std::shared_ptr<const convexfn::NodeSet> Mesh::node_set() const {
  if (!node_set_) node_set_ = std::make_shared<const convexfn::NodeSet>(domain_, nodes_, boundary_);
  return node_set_;
}

Vec Mesh::barycentric(Index s, const Vec& x) const {
  const int n = dim();
  const Index* v = simplex(s);
  Mat e(n, n);
  for (int k = 0; k < n; ++k) e.col(k) = nodes_[v[k + 1]] - nodes_[v[0]];
  Vec l = e.partialPivLu().solve(x - nodes_[v[0]]);
  Vec out(n + 1);
  out(0) = 1.0 - l.sum();
  out.tail(n) = l;
  return out;
}

Index Mesh::locate(const Vec& x) const {
  require(x.size() == dim(), "locate: dimension mismatch");
  const int n = dim();
  long id = 0;
  for (int k = n - 1; k >= 0; --k) {
    double t = (x(k) - bucket_lo_(k)) / bucket_width_(k);
    if (t < -1e-9 || t > 1 + 1e-9) return -1;
    id = id * bucket_dims_[k] + std::clamp(static_cast<long>(t * bucket_dims_[k]), 0L, bucket_dims_[k] - 1);
  }
  Index best = -1;
  double best_min = -1e300;
  for (Index s : buckets_[id]) {
    double m = barycentric(s, x).minCoeff();
    if (m > best_min) {
      best_min = m;
      best = s;
    }
  }
  return best_min >= -1e-9 ? best : -1;
}

double Mesh::interpolate(const Vec& values, const Vec& x) const {
  require(values.size() == size(), "interpolate: value count mismatch");
  Index s = locate(x);
  if (s < 0) throw InvalidArgument("interpolate: point outside the mesh");
  Vec l = barycentric(s, x);
  double v = 0.0;
  for (int k = 0; k <= dim(); ++k) v += l(k) * values(simplex(s)[k]);
  return v;
}

double Mesh::coverage_defect() const {
  double s = 0.0;
  for (Index k = 0; k < simplex_count(); ++k) s += simplex_volume(k);
  return s - domain_.volume();
}

}  // namespace ma::solver
