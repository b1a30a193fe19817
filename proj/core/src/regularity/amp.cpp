#include "mongeampere/regularity/amp.hpp"

#include "mongeampere/barriers/barrier.hpp"
#include "mongeampere/geometry/normalize.hpp"

#include <cmath>

namespace ma::regularity {

geometry::AffineMap unit_ball_map(const geometry::ConvexPolytope& p) {
  auto norm = geometry::normalize(p).map;
  double top = 0.0;
  for (const auto& v : p.vertices()) top = std::max(top, norm.apply(v).norm());
  require(top > 0.0, "unit_ball_map: degenerate polytope");
  return geometry::AffineMap::scaling(p.dim(), 1.0 / top).compose(norm);
}

namespace {

double prefactor(int n, const geometry::AffineMap& L, double Lambda) {
  require(Lambda >= 0.0 && std::isfinite(Lambda), "amp: Lambda must be finite and nonnegative");
  const double c = barriers::AmpProfileBound(n).constant();
  return c * std::pow(std::abs(L.det()), -2.0 / n) * std::pow(Lambda, 1.0 / n);
}

}  // namespace

AmpReport amp_check(const convexfn::PLConvexFunction& u, const geometry::AffineMap& L, double Lambda,
                    const AmpOptions& opts) {
  const int n = u.dim();
  require(L.dim() == n, "amp_check: map dimension mismatch");
  double reach = 0.0;
  for (const auto& v : u.domain().vertices()) reach = std::max(reach, L.apply(v).norm());
  if (reach > 1.0 + 1e-9)
    throw InvalidArgument("amp_check: L does not map the domain into the unit ball (max |Lv| = " +
                          std::to_string(reach) + ")");

  const Index N = u.size();
  Vec w(N);
  for (Index i = 0; i < N; ++i) w(i) = u.value(i) - (opts.subtract ? (*opts.subtract)(u.node(i)) : 0.0);
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  for (Index i = 0; i < N; ++i)
    if (u.is_boundary(i) && std::abs(w(i)) > 1e-9 * scale)
      throw InvalidArgument("amp_check: nonzero boundary value at node " + std::to_string(i));

  AmpReport r;
  r.dim = n;
  r.constant = barriers::AmpProfileBound(n).constant();
  r.prefactor = prefactor(n, L, Lambda);
  r.norm = L.spectral_norm();
  r.distance.resize(N);
  r.bound.resize(N);
  r.classical.resize(N);
  r.margin.resize(N);
  r.min_margin = std::numeric_limits<double>::infinity();
  r.tighter = true;
  for (Index i = 0; i < N; ++i) {
    const double d = u.boundary_distance(i);
    const double t = r.norm * d;
    r.distance(i) = d;
    r.bound(i) = r.prefactor * barriers::a_lower(n, t);
    r.classical(i) = r.prefactor * std::pow(t, 1.0 / n);
    r.margin(i) = r.bound(i) - std::abs(w(i));
    if (r.margin(i) < r.min_margin) {
      r.min_margin = r.margin(i);
      r.worst_node = i;
    }
    if (d > 0.0 && d <= opts.tight_depth) {
      ++r.tight_checked;
      if (!(r.bound(i) < r.classical(i))) r.tighter = false;
    }
  }
  if (r.tight_checked == 0) r.tighter = false;
  r.pass = r.min_margin >= -opts.tolerance && r.margin.allFinite();
  return r;
}

namespace {

ModulusBound finish(ModulusBound b, double tolerance) {
  b.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < b.delta.size(); ++k) b.min_margin = std::min(b.min_margin, b.rhs[k] - b.lhs[k]);
  b.pass = b.delta.empty() || b.min_margin >= -tolerance;
  return b;
}

}  // namespace

ModulusBound holder_bound_check(const convexfn::ModulusCurve& omega_u, const convexfn::ModulusCurve& omega_g,
                                const geometry::AffineMap& L, double Lambda, double tolerance) {
  const int n = L.dim();
  const double pre = prefactor(n, L, Lambda);
  ModulusBound b;
  for (std::size_t k = 0; k < omega_u.delta.size(); ++k) {
    const double d = omega_u.delta[k];
    b.delta.push_back(d);
    b.lhs.push_back(omega_u.omega[k]);
    b.rhs.push_back(omega_g.at(d) + pre * barriers::a_lower(n, L.spectral_norm() * d));
  }
  return finish(std::move(b), tolerance);
}

ModulusBound subadditivity_check(const convexfn::ModulusCurve& omega_u, const convexfn::ModulusCurve& omega_g,
                                 const convexfn::ModulusCurve& omega_0, double tolerance) {
  ModulusBound b;
  for (std::size_t k = 0; k < omega_u.delta.size(); ++k) {
    const double d = omega_u.delta[k];
    b.delta.push_back(d);
    b.lhs.push_back(omega_u.omega[k]);
    b.rhs.push_back(omega_g.at(d) + omega_0.at(d));
  }
  return finish(std::move(b), tolerance);
}

}  // namespace ma::regularity
