#pragma once

// Convex polygon / polyhedron clipping by halfspaces a.p <= b, with every
// edge (2D) or face (3D) tagged by the index of the plane that created it.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

namespace ma::convexfn::detail {

enum class ClipResult { Unchanged, Touched, Cut, Emptied };

// Tolerance for a plane a.p <= b when the cell lives at scale `ref` around
// the origin (independent of how far the search box reaches).
struct Tolerance {
  double ref = 1.0;
  double shift = 0.0;  // |p0|, the size of the removed gradient guess
  double operator()(double b, double a_norm) const {
    return 1e-13 * (std::abs(b) + a_norm * ref) + 1e-15 * a_norm * shift;
  }
};

struct Polygon {
  std::vector<Eigen::Vector2d> v;
  std::vector<long> tag;  // tag[k]: edge v[k] -> v[k+1]

  static Polygon box(double half) {
    Polygon p;
    p.v = {{-half, -half}, {half, -half}, {half, half}, {-half, half}};
    p.tag = {-1, -2, -3, -4};
    return p;
  }

  bool empty() const { return v.empty(); }

  double area() const {
    double s = 0.0;
    for (std::size_t k = 1; k + 1 < v.size(); ++k) {
      Eigen::Vector2d e1 = v[k] - v[0], e2 = v[k + 1] - v[0];
      s += e1.x() * e2.y() - e1.y() * e2.x();
    }
    return 0.5 * s;
  }

  ClipResult clip(const Eigen::Vector2d& a, double b, long t, double tol, std::vector<double>& d) {
    const std::size_t m = v.size();
    d.resize(m);
    double dmax = -1e300, dmin = 1e300;
    for (std::size_t k = 0; k < m; ++k) {
      d[k] = a.dot(v[k]) - b;
      dmax = std::max(dmax, d[k]);
      dmin = std::min(dmin, d[k]);
    }
    if (dmax <= tol) return dmax >= -tol ? ClipResult::Touched : ClipResult::Unchanged;
    if (dmin > tol) {
      v.clear();
      tag.clear();
      return ClipResult::Emptied;
    }
    std::vector<Eigen::Vector2d> nv;
    std::vector<long> nt;
    nv.reserve(m + 2);
    nt.reserve(m + 2);
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t q = (k + 1) % m;
      if (d[k] <= tol) {
        nv.push_back(v[k]);
        nt.push_back(tag[k]);
      }
      bool leaving = d[k] < -tol && d[q] > tol;
      bool entering = d[k] > tol && d[q] < -tol;
      if (leaving || entering) {
        double s = d[k] / (d[k] - d[q]);
        nv.push_back(v[k] + s * (v[q] - v[k]));
        nt.push_back(leaving ? t : tag[k]);
      }
    }
    // an edge whose two ends lie on the new line belongs to it
    const std::size_t nm = nv.size();
    for (std::size_t k = 0; k < nm; ++k) {
      const Eigen::Vector2d& p = nv[k];
      const Eigen::Vector2d& q = nv[(k + 1) % nm];
      if (std::abs(a.dot(p) - b) <= tol && std::abs(a.dot(q) - b) <= tol) nt[k] = t;
    }
    v = std::move(nv);
    tag = std::move(nt);
    if (v.size() < 3) {
      // degenerate sliver: keep the points for emptiness tests, area is zero
      tag.assign(v.size(), t);
    }
    return ClipResult::Cut;
  }
};

struct Face {
  long tag;
  std::vector<Eigen::Vector3d> p;
};

struct Polyhedron {
  std::vector<Face> faces;

  static Polyhedron box(double h) {
    Polyhedron P;
    using V = Eigen::Vector3d;
    // counterclockwise seen from outside
    P.faces.push_back({-1, {V(-h, -h, -h), V(-h, h, -h), V(h, h, -h), V(h, -h, -h)}});
    P.faces.push_back({-2, {V(-h, -h, h), V(h, -h, h), V(h, h, h), V(-h, h, h)}});
    P.faces.push_back({-3, {V(-h, -h, -h), V(h, -h, -h), V(h, -h, h), V(-h, -h, h)}});
    P.faces.push_back({-4, {V(-h, h, -h), V(-h, h, h), V(h, h, h), V(h, h, -h)}});
    P.faces.push_back({-5, {V(-h, -h, -h), V(-h, -h, h), V(-h, h, h), V(-h, h, -h)}});
    P.faces.push_back({-6, {V(h, -h, -h), V(h, h, -h), V(h, h, h), V(h, -h, h)}});
    return P;
  }

  bool empty() const { return faces.empty(); }

  static Eigen::Vector3d area_vector(const Face& f) {
    Eigen::Vector3d s = Eigen::Vector3d::Zero();
    for (std::size_t k = 1; k + 1 < f.p.size(); ++k) s += (f.p[k] - f.p[0]).cross(f.p[k + 1] - f.p[0]);
    return 0.5 * s;
  }

  double volume() const {
    if (faces.empty()) return 0.0;
    const Eigen::Vector3d o = faces[0].p[0];
    double s = 0.0;
    for (const auto& f : faces) s += area_vector(f).dot(f.p[0] - o);
    return s / 3.0;
  }

  ClipResult clip(const Eigen::Vector3d& a, double b, long t, double tol) {
    double dmax = -1e300, dmin = 1e300;
    for (const auto& f : faces)
      for (const auto& q : f.p) {
        double d = a.dot(q) - b;
        dmax = std::max(dmax, d);
        dmin = std::min(dmin, d);
      }
    if (dmax <= tol) return dmax >= -tol ? ClipResult::Touched : ClipResult::Unchanged;
    if (dmin > tol) {
      faces.clear();
      return ClipResult::Emptied;
    }
    std::vector<Face> out;
    out.reserve(faces.size() + 1);
    std::vector<Eigen::Vector3d> cap;
    for (const auto& f : faces) {
      const std::size_t m = f.p.size();
      Face g{f.tag, {}};
      g.p.reserve(m + 2);
      for (std::size_t k = 0; k < m; ++k) {
        std::size_t q = (k + 1) % m;
        double dk = a.dot(f.p[k]) - b, dq = a.dot(f.p[q]) - b;
        if (dk <= tol) g.p.push_back(f.p[k]);
        if (std::abs(dk) <= tol) cap.push_back(f.p[k]);
        if ((dk < -tol && dq > tol) || (dk > tol && dq < -tol)) {
          Eigen::Vector3d x = f.p[k] + (dk / (dk - dq)) * (f.p[q] - f.p[k]);
          g.p.push_back(x);
          cap.push_back(x);
        }
      }
      if (g.p.size() >= 3) out.push_back(std::move(g));
    }
    if (cap.size() >= 3) {
      Eigen::Vector3d n = a.normalized();
      Eigen::Vector3d c = Eigen::Vector3d::Zero();
      for (const auto& x : cap) c += x;
      c /= static_cast<double>(cap.size());
      Eigen::Vector3d e1 = std::abs(n.x()) < 0.9 ? n.cross(Eigen::Vector3d::UnitX()) : n.cross(Eigen::Vector3d::UnitY());
      e1.normalize();
      Eigen::Vector3d e2 = n.cross(e1);
      std::vector<std::pair<double, Eigen::Vector3d>> ang;
      ang.reserve(cap.size());
      for (const auto& x : cap) ang.emplace_back(std::atan2(e2.dot(x - c), e1.dot(x - c)), x);
      std::sort(ang.begin(), ang.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
      Face capf{t, {}};
      double scale = 0.0;
      for (const auto& x : cap) scale = std::max(scale, (x - c).norm());
      for (const auto& [th, x] : ang)
        if (capf.p.empty() || (x - capf.p.back()).norm() > 1e-12 * scale) capf.p.push_back(x);
      if (capf.p.size() >= 2 && (capf.p.front() - capf.p.back()).norm() <= 1e-12 * scale) capf.p.pop_back();
      if (capf.p.size() >= 3) out.push_back(std::move(capf));
    }
    faces = std::move(out);
    return ClipResult::Cut;
  }
};

}  // namespace ma::convexfn::detail
