#include "mongeampere/regularity/converse.hpp"

#include "mongeampere/barriers/barrier.hpp"

#include <cmath>

namespace ma::regularity {

namespace {

// Orthonormal basis with first column e.
Mat frame(const Vec& e) {
  const int n = static_cast<int>(e.size());
  Mat R(n, n);
  R.col(0) = e;
  Index skip = 0;
  e.cwiseAbs().maxCoeff(&skip);
  int col = 1;
  for (int k = 0; k < n && col < n; ++k) {
    if (k == skip) continue;
    Vec v = Vec::Unit(n, k);
    for (int j = 0; j < col; ++j) v -= R.col(j).dot(v) * R.col(j);
    R.col(col++) = v.normalized();
  }
  return R;
}

// Lateral sample points of B_2^{m}.
std::vector<Vec> lateral_samples(int m, int per_axis) {
  std::vector<Vec> out;
  if (m == 0) return {Vec(0)};
  const int k = std::max(2, per_axis);
  std::vector<int> idx(m, 0);
  while (true) {
    Vec y(m);
    for (int j = 0; j < m; ++j) y(j) = -2.0 + 4.0 * idx[j] / (k - 1);
    if (y.norm() <= 2.0 + 1e-12) out.push_back(y);
    int j = 0;
    while (j < m && ++idx[j] == k) idx[j++] = 0;
    if (j == m) break;
  }
  out.push_back(Vec::Zero(m));
  return out;
}

}  // namespace

ConverseSetup converse_setup(const convexfn::PLConvexFunction& u, std::size_t facet, const ConverseOptions& opts) {
  return converse_setup(u, facet, [&](const Vec& x) { return convexfn::evaluate(u, x); }, opts);
}

ConverseSetup converse_setup(const convexfn::PLConvexFunction& u, std::size_t facet, const Evaluator& eval,
                             const ConverseOptions& opts) {
  const auto& dom = u.domain();
  const int n = u.dim();
  require(n >= 2, "converse_setup: dimension must be at least 2");
  require(facet < dom.halfspaces().size(), "converse_setup: facet index out of range");
  const auto& face = dom.halfspaces()[facet];
  const Vec nu = face.normal;
  const Vec e1 = -nu;

  Vec c = Vec::Zero(n);
  const auto& fv = dom.facet_vertices(facet);
  for (int v : fv) c += dom.vertices()[v];
  c /= static_cast<double>(fv.size());

  // largest disc around c inside the facet, then the tallest cylinder on it
  double rho = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < dom.halfspaces().size(); ++j) {
    if (j == facet) continue;
    const auto& h = dom.halfspaces()[j];
    double lateral = (h.normal - h.normal.dot(nu) * nu).norm();
    if (lateral > 1e-14) rho = std::min(rho, h.slack(c) / lateral);
  }
  require(std::isfinite(rho) && rho > 0.0, "converse_setup: facet has no interior disc");
  double height = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < dom.halfspaces().size(); ++j) {
    if (j == facet) continue;
    const auto& h = dom.halfspaces()[j];
    const double rate = h.normal.dot(e1);
    const double lateral = (h.normal - h.normal.dot(nu) * nu).norm();
    if (rate > 1e-14) height = std::min(height, (h.slack(c) - lateral * rho) / rate);
  }
  require(std::isfinite(height) && height > 0.0, "converse_setup: no cylinder fits on the facet");

  const Mat R = frame(e1);
  Vec s = Vec::Constant(n, 2.0 / rho);
  s(0) = 2.0 / height;
  const Mat A = s.asDiagonal() * R.transpose();
  ConverseSetup out{geometry::AffineMap(A, -A * c), {}, 0.0, 0.0, {}, {}, 0.0, 0.0, 0};
  const auto& L = out.L;
  const auto Linv = L.inverse();

  const Index N = u.size();
  const double scale = std::max(1.0, u.values().cwiseAbs().maxCoeff());
  const double ftol = 1e-9 * std::max(1.0, dom.enclosing_radius(c));

  // affine data on the facet, as a function of the lateral coordinates
  std::vector<Index> on_face;
  for (Index i = 0; i < N; ++i)
    if (u.is_boundary(i) && std::abs(face.slack(u.node(i))) <= ftol) on_face.push_back(i);
  require(static_cast<int>(on_face.size()) >= n, "converse_setup: too few nodes on the facet");
  Mat X(on_face.size(), n);
  Vec b(on_face.size());
  for (std::size_t k = 0; k < on_face.size(); ++k) {
    Vec y = L.apply(u.node(on_face[k]));
    X.row(k).head(n - 1) = y.tail(n - 1).transpose();
    X(k, n - 1) = 1.0;
    b(k) = u.value(on_face[k]);
  }
  Vec coef = X.colPivHouseholderQr().solve(b);
  const double misfit = (X * coef - b).cwiseAbs().maxCoeff();
  if (misfit > opts.affine_tol * scale)
    throw InvalidArgument("converse_setup: u is not affine on the facet (misfit " + std::to_string(misfit) + ")");
  auto l1 = [&](const Vec& y) { return coef.head(n - 1).dot(y.tail(n - 1)) + coef(n - 1); };

  // M bounds v = u o L^{-1} - l1 on the upper set D above F
  const Vec dir = Linv.apply_linear(Vec::Unit(n, 0));
  double M = 0.0;
  for (const Vec& yl : lateral_samples(n - 1, opts.lateral_samples)) {
    Vec y0(n);
    y0(0) = 0.0;
    y0.tail(n - 1) = yl;
    const Vec x0 = Linv.apply(y0);
    double top = std::numeric_limits<double>::infinity();
    for (const auto& h : dom.halfspaces()) {
      const double rate = h.normal.dot(dir);
      if (rate > 1e-14) top = std::min(top, std::max(0.0, h.slack(x0)) / rate);
    }
    M = std::max(M, eval(x0 + top * dir) - l1(y0));
  }
  for (Index i = 0; i < N; ++i) {
    if (!u.is_boundary(i)) continue;
    Vec y = L.apply(u.node(i));
    if (y(0) >= 2.0 - 1e-12 && y.tail(n - 1).norm() <= 2.0 + 1e-12) M = std::max(M, u.value(i) - l1(y));
  }
  out.M = M;
  out.l_g.gradient = Vec::Zero(n);
  out.l_g.gradient(0) = 0.5 * M;
  out.l_g.gradient.tail(n - 1) = coef.head(n - 1);
  out.l_g.offset = coef(n - 1);
  out.lipschitz = (A.transpose() * out.l_g.gradient).norm();

  out.u0.resize(N);
  const double ytol = 1e-9;
  for (Index i = 0; i < N; ++i) {
    Vec y = L.apply(u.node(i));
    out.u0(i) = u.value(i) - out.l_g(y);
    const double lat = y.tail(n - 1).norm();
    if (y(0) >= -ytol && y(0) <= 2.0 + ytol && lat <= 2.0 + ytol) {
      out.in_cylinder.push_back(i);
      out.max_u0_cylinder = std::max(out.max_u0_cylinder, out.u0(i));
      if (std::abs(y(0)) <= ytol) {
        ++out.face_nodes;
        out.max_abs_u0_face = std::max(out.max_abs_u0_face, std::abs(out.u0(i)));
      }
    }
  }
  if (out.max_u0_cylinder > opts.tolerance * scale)
    throw InvalidArgument("converse_setup: u_0 is positive inside K_{2,2} (" +
                          std::to_string(out.max_u0_cylinder) + ")");
  if (out.max_abs_u0_face > opts.tolerance * scale)
    throw InvalidArgument("converse_setup: u_0 does not vanish on F (" + std::to_string(out.max_abs_u0_face) +
                          ")");
  return out;
}

ConverseProfile converse_profile(const ConverseSetup& setup, const Evaluator& eval, int dim,
                                 const std::vector<double>& depths) {
  require(setup.L.dim() == dim, "converse_profile: dimension mismatch");
  const auto Linv = setup.L.inverse();
  ConverseProfile p;
  p.constant = std::numeric_limits<double>::infinity();
  p.pass = !depths.empty();
  for (double t : depths) {
    require(t > 0.0 && t <= 1.0, "converse_profile: depths must lie in (0, 1]");
    Vec y = Vec::Zero(dim);
    y(0) = t;
    const double v = eval(Linv.apply(y)) - setup.l_g(y);
    p.x1.push_back(t);
    p.u0.push_back(v);
    if (!(v < 0.0)) p.pass = false;
    p.constant = std::min(p.constant, std::abs(v) / barriers::a_upper(dim, t));
  }
  if (!p.pass) p.constant = 0.0;
  return p;
}

}  // namespace ma::regularity
