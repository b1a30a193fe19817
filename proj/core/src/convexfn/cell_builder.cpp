#include "cell_builder.hpp"

#include "clip.hpp"

#include <algorithm>
#include <cmath>

namespace ma::convexfn::detail {
namespace {

struct PlaneSet {
  int dim = 0;
  std::vector<Index> idx;
  std::vector<double> coef;  // normals, dim entries per plane
  std::vector<double> b;

  std::size_t size() const { return b.size(); }
  Eigen::Map<const Vec> a(std::size_t k) const { return {coef.data() + k * dim, dim}; }
  const double* ptr(std::size_t k) const { return coef.data() + k * dim; }
  template <class V>
  void push(Index j, const V& normal, double offset) {
    idx.push_back(j);
    for (int i = 0; i < dim; ++i) coef.push_back(normal(i));
    b.push_back(offset);
  }
};

// Least-squares gradient guess used to center the search box.
Vec gradient_guess(const PlaneSet& ps, int n) {
  Mat m = Mat::Zero(n, n);
  Vec r = Vec::Zero(n);
  for (std::size_t k = 0; k < ps.size(); ++k) {
    auto a = ps.a(k);
    double w = 1.0 / a.squaredNorm();
    m += w * a * a.transpose();
    r += w * a * ps.b[k];
  }
  Eigen::LDLT<Mat> ldlt(m);
  if (ldlt.info() != Eigen::Success) return Vec::Zero(n);
  Vec d = ldlt.vectorD();
  if (d.minCoeff() <= 1e-10 * std::max(1.0, d.maxCoeff())) return Vec::Zero(n);
  Vec g = ldlt.solve(r);
  return g.allFinite() ? g : Vec::Zero(n);
}

template <int D>
struct Body;

template <>
struct Body<2> {
  using V = Eigen::Vector2d;
  Polygon poly;
  std::vector<double> scratch;

  void reset(double h) { poly = Polygon::box(h); }
  bool empty() const { return poly.empty(); }
  ClipResult clip(const double* a, double b, long t, double tol) { return poly.clip(V(a[0], a[1]), b, t, tol, scratch); }
  template <class F>
  void for_each_vertex(F&& f) const {
    for (const auto& v : poly.v) f(v);
  }
  double volume() const { return poly.v.size() < 3 ? 0.0 : poly.area(); }
  void facets(std::vector<std::pair<Index, double>>& out) const {
    const std::size_t m = poly.v.size();
    if (m < 3) return;
    for (std::size_t k = 0; k < m; ++k)
      if (poly.tag[k] >= 0) out.emplace_back(poly.tag[k], (poly.v[(k + 1) % m] - poly.v[k]).norm());
  }
};

template <>
struct Body<3> {
  using V = Eigen::Vector3d;
  Polyhedron poly;

  void reset(double h) { poly = Polyhedron::box(h); }
  bool empty() const { return poly.empty(); }
  ClipResult clip(const double* a, double b, long t, double tol) { return poly.clip(V(a[0], a[1], a[2]), b, t, tol); }
  template <class F>
  void for_each_vertex(F&& f) const {
    for (const auto& face : poly.faces)
      for (const auto& v : face.p) f(v);
  }
  double volume() const { return std::max(0.0, poly.volume()); }
  void facets(std::vector<std::pair<Index, double>>& out) const {
    for (const auto& face : poly.faces)
      if (face.tag >= 0) out.emplace_back(face.tag, Polyhedron::area_vector(face).norm());
  }
};

template <int D>
RawCell build_fixed(const std::vector<Vec>& nodes, const Vec& values, const BuildRequest& req,
                    const PlaneSet& ps, const Vec& p0) {
  RawCell out;
  const Index n_nodes = static_cast<Index>(nodes.size());
  double b_max = 0.0;
  for (std::size_t k = 0; k < ps.size(); ++k) b_max = std::max(b_max, std::abs(ps.b[k]) / ps.a(k).norm());
  double half = std::max(2.0 * b_max, 1e-12 * (1.0 + p0.norm()));
  const double half_limit = 1e8 * (1.0 + p0.norm() + b_max);
  const Tolerance tol{half, p0.norm()};

  std::vector<char> in_set;
  if (req.exact) {
    in_set.assign(n_nodes, 0);
    for (Index j : ps.idx) in_set[j] = 1;
    if (req.self >= 0) in_set[req.self] = 1;
  }

  // An emptied box may only mean the cell lies outside it, so the box grows a
  // few times before a cell is declared empty. Unbounded cells stop growing
  // after the same number of steps.
  constexpr int kGrowSteps = 4;
  int empty_steps = 0, open_steps = 0;
  Body<D> body;
  while (true) {
    body.reset(half);
    Index touching = 0, additions = 0;
    bool emptied = false;
    for (std::size_t k = 0; k < ps.size() && !emptied; ++k) {
      ClipResult r = body.clip(ps.ptr(k), ps.b[k], static_cast<long>(ps.idx[k]), tol(ps.b[k], ps.a(k).norm()));
      if (r == ClipResult::Touched) ++touching;
      emptied = r == ClipResult::Emptied;
    }
    if (!emptied && req.exact) {
      using FV = Eigen::Matrix<double, D, 1>;
      FV cf = FV::Zero();
      Index count = 0;
      body.for_each_vertex([&](const auto& v) {
        cf += v;
        ++count;
      });
      cf /= static_cast<double>(std::max<Index>(count, 1));
      double r = 0.0;
      body.for_each_vertex([&](const auto& v) { r = std::max(r, (v - cf).norm()); });
      const FV xf = Eigen::Map<const FV>(req.x.data());
      const FV p0f = Eigen::Map<const FV>(p0.data());
      const double cn = cf.norm();
      auto visit = [&](Index j) {
        if (in_set[j]) return true;
        const FV a = Eigen::Map<const FV>(nodes[j].data()) - xf;
        double an = a.norm();
        if (an == 0.0) return values(j) - req.value >= -1e-13 * (1.0 + std::abs(req.value));
        double b = values(j) - req.value - a.dot(p0f);
        double gap = b - a.dot(cf);
        if (gap >= r * an * (1.0 + 1e-12) + 1e-13 * (std::abs(b) + an * cn)) return true;
        ClipResult res = body.clip(a.data(), b, static_cast<long>(j), tol(b, an));
        if (res == ClipResult::Cut) ++additions;
        if (res == ClipResult::Touched) ++touching;
        return res != ClipResult::Emptied;
      };
      bool alive = true;
      if (req.pool) {
        for (Index j : *req.pool)
          if (!(alive = visit(j))) break;
      } else {
        for (Index j = 0; j < n_nodes && alive; ++j) alive = visit(j);
      }
      emptied = !alive;
    }
    out.touching = touching;
    out.scan_additions = additions;
    if (emptied) {
      if (++empty_steps > kGrowSteps) {
        out.empty = true;
        return out;
      }
      half *= 8.0;
      ++out.expansions;
      continue;
    }
    double reach = 0.0;
    body.for_each_vertex([&](const auto& v) { reach = std::max(reach, v.cwiseAbs().maxCoeff()); });
    if (reach >= 0.5 * half) {
      if (req.allow_unbounded ? ++open_steps > kGrowSteps : half >= half_limit) {
        if (!req.allow_unbounded) throw Error("subgradient cell: unbounded cell at an interior point");
        out.bounded = false;
        break;
      }
      half *= 8.0;
      ++out.expansions;
      continue;
    }
    break;
  }
  out.empty = body.empty();
  if (out.empty) return out;
  out.volume = out.bounded ? body.volume() : std::numeric_limits<double>::infinity();
  if (req.geometry) {
    if (req.vertices) body.for_each_vertex([&](const auto& v) { out.vertices.push_back(Vec(v) + p0); });
    if (out.bounded) body.facets(out.facets);
  }
  return out;
}

RawCell build_generic(const std::vector<Vec>& nodes, const Vec& values, const BuildRequest& req,
                      PlaneSet ps, const Vec& p0) {
  const int n = static_cast<int>(req.x.size());
  RawCell out;
  double b_max = 0.0;
  for (std::size_t k = 0; k < ps.size(); ++k) b_max = std::max(b_max, std::abs(ps.b[k]) / ps.a(k).norm());
  double half = std::max(2.0 * b_max, 1e-9 * (1.0 + p0.norm()));
  const double half_limit = 1e8 * (1.0 + p0.norm() + b_max);
  const Index n_nodes = static_cast<Index>(nodes.size());
  while (true) {
    std::vector<geometry::Halfspace> hs;
    for (int i = 0; i < n; ++i) {
      Vec e = Vec::Zero(n);
      e(i) = 1.0;
      hs.push_back({e, half});
      hs.push_back({-e, half});
    }
    for (std::size_t k = 0; k < ps.size(); ++k) hs.push_back({Vec(ps.a(k)), ps.b[k]});
    std::optional<geometry::ConvexPolytope> poly;
    try {
      poly = geometry::ConvexPolytope::from_halfspaces(hs);
    } catch (const DegenerateInput&) {
      out.empty = true;
      return out;
    }
    bool added = false;
    if (req.exact) {
      for (Index j = 0; j < n_nodes; ++j) {
        if (j == req.self || std::find(ps.idx.begin(), ps.idx.end(), j) != ps.idx.end()) continue;
        Vec a = nodes[j] - req.x;
        if (a.norm() == 0.0) continue;
        double b = values(j) - req.value - a.dot(p0);
        for (const auto& v : poly->vertices())
          if (a.dot(v) - b > 1e-12 * (1.0 + std::abs(b))) {
            ps.push(j, a, b);
            ++out.scan_additions;
            added = true;
            break;
          }
      }
    }
    if (added) continue;
    double reach = 0.0;
    for (const auto& v : poly->vertices()) reach = std::max(reach, v.cwiseAbs().maxCoeff());
    if (reach >= 0.5 * half && half < half_limit) {
      half *= 8.0;
      ++out.expansions;
      continue;
    }
    if (reach >= 0.5 * half) {
      if (!req.allow_unbounded) throw Error("subgradient cell: unbounded cell at an interior point");
      out.bounded = false;
    }
    out.empty = false;
    out.volume = out.bounded ? poly->volume() : std::numeric_limits<double>::infinity();
    if (req.geometry) {
      for (const auto& v : poly->vertices()) out.vertices.push_back(v + p0);
      for (std::size_t f = 0; f < poly->halfspaces().size(); ++f) {
        const auto& h = poly->halfspaces()[f];
        for (std::size_t k = 0; k < ps.size(); ++k) {
          Vec nk = ps.a(k) / ps.a(k).norm();
          if ((nk - h.normal).norm() < 1e-9 && std::abs(ps.b[k] / ps.a(k).norm() - h.offset) < 1e-9 * (1 + std::abs(h.offset))) {
            out.facets.emplace_back(ps.idx[k], poly->facet_area(f));
            break;
          }
        }
      }
    }
    return out;
  }
}

}  // namespace

RawCell build_cell(const std::vector<Vec>& nodes, const Vec& values, const BuildRequest& req) {
  const int n = static_cast<int>(req.x.size());
  PlaneSet ps;
  ps.dim = n;
  const std::size_t expect = req.candidates ? req.candidates->size() : req.pool ? req.pool->size() : nodes.size();
  ps.idx.reserve(expect);
  ps.b.reserve(expect);
  ps.coef.reserve(expect * n);
  auto add = [&](Index j) {
    if (j == req.self) return true;
    const double b = values(j) - req.value;
    auto a = nodes[j] - req.x;
    if (a.squaredNorm() == 0.0) return b >= -1e-13 * (1.0 + std::abs(req.value));
    ps.push(j, a, b);
    return true;
  };
  bool feasible = true;
  if (req.candidates) {
    for (Index j : *req.candidates) feasible = add(j) && feasible;
  } else if (req.pool) {
    for (Index j : *req.pool) feasible = add(j) && feasible;
  } else {
    for (Index j = 0; j < static_cast<Index>(nodes.size()); ++j) feasible = add(j) && feasible;
  }
  if (!feasible) return {};

  Vec p0 = gradient_guess(ps, n);
  for (std::size_t k = 0; k < ps.size(); ++k) ps.b[k] -= ps.a(k).dot(p0);

  BuildRequest r = req;
  if (!req.candidates) r.exact = false;  // already every eligible node
  if (n == 2) return build_fixed<2>(nodes, values, r, ps, p0);
  if (n == 3) return build_fixed<3>(nodes, values, r, ps, p0);
  return build_generic(nodes, values, r, std::move(ps), p0);
}

std::vector<std::vector<Index>> proximity_candidates(const std::vector<Vec>& nodes) {
  const Index count = static_cast<Index>(nodes.size());
  std::vector<std::vector<Index>> out(count);
  if (count == 0) return out;
  const int n = static_cast<int>(nodes[0].size());
  Vec lo = nodes[0], hi = nodes[0];
  for (const auto& x : nodes) {
    lo = lo.cwiseMin(x);
    hi = hi.cwiseMax(x);
  }
  // about two nodes per bucket
  const double cells = std::max(1.0, count / 2.0);
  std::vector<long> dims(n);
  Vec width = (hi - lo).cwiseMax(1e-300);
  double vol = 1.0;
  int spread = 0;
  for (int k = 0; k < n; ++k)
    if (hi(k) > lo(k)) {
      vol *= width(k);
      ++spread;
    }
  double side = spread ? std::pow(vol / cells, 1.0 / spread) : 1.0;
  long total = 1;
  for (int k = 0; k < n; ++k) {
    dims[k] = hi(k) > lo(k) ? std::max(1L, static_cast<long>(width(k) / side)) : 1L;
    total *= dims[k];
  }
  auto coord = [&](const Vec& x, int k) {
    long c = static_cast<long>((x(k) - lo(k)) / width(k) * dims[k]);
    return std::clamp(c, 0L, dims[k] - 1);
  };
  std::vector<std::vector<Index>> bucket(total);
  std::vector<long> key(count);
  for (Index i = 0; i < count; ++i) {
    long id = 0;
    for (int k = n - 1; k >= 0; --k) id = id * dims[k] + coord(nodes[i], k);
    key[i] = id;
    bucket[id].push_back(i);
  }
  std::vector<long> c(n), off(n);
  for (Index i = 0; i < count; ++i) {
    for (int k = 0; k < n; ++k) c[k] = coord(nodes[i], k);
    std::fill(off.begin(), off.end(), -1);
    while (true) {
      long id = 0;
      bool ok = true;
      for (int k = n - 1; k >= 0 && ok; --k) {
        long q = c[k] + off[k];
        ok = q >= 0 && q < dims[k];
        id = id * dims[k] + q;
      }
      if (ok)
        for (Index j : bucket[id])
          if (j != i) out[i].push_back(j);
      int k = 0;
      while (k < n && ++off[k] > 1) off[k++] = -1;
      if (k == n) break;
    }
  }
  return out;
}

double envelope_by_bisection(const std::vector<Vec>& nodes, const Vec& values, const Vec& x,
                             Index self, double upper, const std::vector<Index>* pool,
                             const std::vector<Index>* candidates) {
  BuildRequest req;
  req.x = x;
  req.self = self;
  req.pool = pool;
  req.candidates = candidates;
  req.exact = candidates != nullptr;
  req.geometry = false;
  req.allow_unbounded = true;
  auto nonempty = [&](double v) {
    req.value = v;
    return !build_cell(nodes, values, req).empty;
  };
  if (nonempty(upper)) return upper;
  double lo = std::numeric_limits<double>::infinity();
  if (pool) {
    for (Index j : *pool)
      if (j != self) lo = std::min(lo, values(j));
  } else {
    for (Index j = 0; j < values.size(); ++j)
      if (j != self) lo = std::min(lo, values(j));
  }
  double hi = upper;
  if (!(lo < hi)) return lo;
  for (int it = 0; it < 200 && hi - lo > 4e-16 * std::max({1.0, std::abs(lo), std::abs(hi)}); ++it) {
    double mid = 0.5 * (lo + hi);
    if (nonempty(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace ma::convexfn::detail
