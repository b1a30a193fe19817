#include "mongeampere/solver/problem.hpp"

#include "../convexfn/cell_builder.hpp"

#include <cmath>

namespace ma::solver {
namespace {

// Least-squares affine fit of g over the boundary nodes; returns (a, c, max residual).
struct AffineFit {
  Vec slope;
  double offset = 0.0;
  double residual = 0.0;
};

AffineFit fit_boundary(const MAProblem& p) {
  const Mesh& m = *p.mesh;
  const int n = m.dim();
  std::vector<Index> bnd;
  for (Index i = 0; i < m.size(); ++i)
    if (m.is_boundary(i)) bnd.push_back(i);
  Mat a(bnd.size(), n + 1);
  Vec b(bnd.size());
  for (std::size_t k = 0; k < bnd.size(); ++k) {
    a.row(k).head(n) = m.nodes()[bnd[k]].transpose();
    a(k, n) = 1.0;
    b(k) = p.g(bnd[k]);
  }
  Vec c = a.colPivHouseholderQr().solve(b);
  AffineFit fit;
  fit.slope = c.head(n);
  fit.offset = c(n);
  fit.residual = (a * c - b).lpNorm<Eigen::Infinity>();
  return fit;
}

}  // namespace

MAProblem MAProblem::make(std::shared_ptr<const Mesh> mesh, Field f, const Field& g, double Lambda,
                          std::optional<double> lambda) {
  require(mesh != nullptr, "problem: null mesh");
  require(static_cast<bool>(f) && static_cast<bool>(g), "problem: f and g are required");
  MAProblem p;
  p.g = Vec::Zero(mesh->size());
  for (Index i = 0; i < mesh->size(); ++i)
    if (mesh->is_boundary(i)) p.g(i) = g(mesh->nodes()[i]);
  p.mesh = std::move(mesh);
  p.f = std::move(f);
  p.Lambda = Lambda;
  p.lambda = lambda;
  return p;
}

double sampled_max(const MAProblem& p) {
  double top = 0.0;
  for (Index s = 0; s < p.mesh->simplex_count(); ++s) top = std::max(top, p.f(p.mesh->simplex_centroid(s)));
  for (const auto& x : p.mesh->nodes()) top = std::max(top, p.f(x));
  return top;
}

bool boundary_data_affine(const MAProblem& p, double tol) {
  double scale = 1.0;
  for (Index i = 0; i < p.mesh->size(); ++i)
    if (p.mesh->is_boundary(i)) scale = std::max(scale, std::abs(p.g(i)));
  return fit_boundary(p).residual <= tol * scale;
}

void validate(const MAProblem& p) {
  require(p.mesh != nullptr && static_cast<bool>(p.f), "problem: mesh and f are required");
  require(p.g.size() == p.mesh->size(), "problem: boundary data size mismatch");
  require(p.g.allFinite(), "problem: non-finite boundary data");
  require(!(p.Lambda <= 0.0), "problem: Lambda must be positive");
  const double upper = std::isfinite(p.Lambda) ? p.Lambda * (1.0 + 1e-12) : p.Lambda;
  auto check = [&](const Vec& x) {
    double v = p.f(x);
    if (!(v >= 0.0)) throw InvalidArgument("problem: negative or undefined density sample");
    if (v > upper) throw InvalidArgument("problem: density exceeds Lambda");
    if (p.lambda && v < *p.lambda * (1.0 - 1e-12)) throw InvalidArgument("problem: density below lambda");
  };
  for (Index s = 0; s < p.mesh->simplex_count(); ++s) check(p.mesh->simplex_centroid(s));
  for (const auto& x : p.mesh->nodes()) check(x);
  if (boundary_data_affine(p)) return;

  // envelope idempotence on the boundary graph
  const Mesh& m = *p.mesh;
  std::vector<Index> bnd;
  for (Index i = 0; i < m.size(); ++i)
    if (m.is_boundary(i)) bnd.push_back(i);
  for (Index i : bnd) {
    convexfn::detail::BuildRequest req;
    req.x = m.nodes()[i];
    req.value = p.g(i);
    req.self = i;
    req.pool = &bnd;
    req.exact = false;
    req.geometry = false;
    req.allow_unbounded = true;
    if (convexfn::detail::build_cell(m.nodes(), p.g, req).empty)
      throw InvalidArgument("problem: boundary data is not convex (node " + std::to_string(i) + ")");
  }
}

Vec target_masses(const MAProblem& p) {
  const Mesh& m = *p.mesh;
  const int n = m.dim();
  Vec t = Vec::Zero(m.size());
  for (Index s = 0; s < m.simplex_count(); ++s) {
    double v = p.f(m.simplex_centroid(s));
    if (!(v >= 0.0)) throw InvalidArgument("target_masses: negative or undefined density sample");
    double share = m.simplex_volume(s) * v / (n + 1.0);
    for (int k = 0; k <= n; ++k) t(m.simplex(s)[k]) += share;
  }
  return t;
}

convexfn::PLConvexFunction boundary_envelope(const MAProblem& p) {
  const Mesh& m = *p.mesh;
  Vec u = p.g;
  AffineFit fit = fit_boundary(p);
  double scale = 1.0;
  for (Index i = 0; i < m.size(); ++i)
    if (m.is_boundary(i)) scale = std::max(scale, std::abs(p.g(i)));
  if (fit.residual <= 1e-12 * scale) {
    for (Index i = 0; i < m.size(); ++i)
      if (!m.is_boundary(i)) u(i) = fit.slope.dot(m.nodes()[i]) + fit.offset;
  } else {
    std::vector<Index> bnd;
    double top = -std::numeric_limits<double>::infinity();
    for (Index i = 0; i < m.size(); ++i)
      if (m.is_boundary(i)) {
        bnd.push_back(i);
        top = std::max(top, p.g(i));
      }
    const double upper = top + 1.0 + std::abs(top);
    const auto& hs = m.domain().halfspaces();
    std::vector<std::vector<Index>> on_facet(hs.size());
    for (Index j : bnd)
      for (std::size_t k = 0; k < hs.size(); ++k)
        if (std::abs(hs[k].slack(m.nodes()[j])) <= 1e-9 * scale) on_facet[k].push_back(j);
    std::vector<Index> seed;
    for (Index i = 0; i < m.size(); ++i) {
      if (m.is_boundary(i)) continue;
      const Vec& x = m.nodes()[i];
      // the two boundary nodes nearest to the foot point on each facet
      seed.clear();
      for (std::size_t k = 0; k < hs.size(); ++k) {
        Vec foot = x + hs[k].slack(x) * hs[k].normal;
        Index best[2] = {-1, -1};
        double d[2] = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
        for (Index j : on_facet[k]) {
          double dj = (m.nodes()[j] - foot).squaredNorm();
          if (dj < d[0]) {
            best[1] = best[0], d[1] = d[0];
            best[0] = j, d[0] = dj;
          } else if (dj < d[1]) {
            best[1] = j, d[1] = dj;
          }
        }
        for (Index b : best)
          if (b >= 0) seed.push_back(b);
      }
      u(i) = convexfn::detail::envelope_by_bisection(m.nodes(), p.g, x, -1, upper, &bnd, &seed);
    }
  }
  return {m.node_set(), u};
}

}  // namespace ma::solver
