#include "mongeampere/convexfn/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ma::convexfn {
namespace {

// Accumulates pair contributions diff * min(1, delta/d) over sorted deltas.
class Accumulator {
 public:
  explicit Accumulator(const std::vector<double>& deltas)
      : deltas_(deltas), direct_(deltas.size(), 0.0), ratio_(deltas.size() + 1, 0.0), seen_(deltas.size(), 0) {}

  void add(double d, double diff) {
    if (!(diff > 0.0) || !(d > 0.0)) return;
    std::size_t k0 = std::lower_bound(deltas_.begin(), deltas_.end(), d) - deltas_.begin();
    if (k0 < deltas_.size()) {
      direct_[k0] = std::max(direct_[k0], diff);
      seen_[k0] = 1;
    }
    ratio_[k0] = std::max(ratio_[k0], diff / d);
  }

  // pairs at distance zero (coincident points) still count as within delta
  void mark_all_seen() { std::fill(seen_.begin(), seen_.end(), 1); }

  ModulusCurve finish() const {
    const std::size_t k = deltas_.size();
    ModulusCurve c;
    c.delta = deltas_;
    c.omega.assign(k, 0.0);
    std::vector<double> suffix(k + 1, 0.0);
    suffix[k] = ratio_[k];
    for (std::size_t i = k; i-- > 0;) suffix[i] = std::max(suffix[i + 1], ratio_[i]);
    double prefix = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < k; ++i) {
      prefix = std::max(prefix, direct_[i]);
      any = any || seen_[i];
      c.omega[i] = std::max(prefix, deltas_[i] * suffix[i + 1]);
      if (!any) {
        char buf[96];
        std::snprintf(buf, sizeof buf, "no node pair within delta=%.6g; chord bound only", deltas_[i]);
        c.warnings.emplace_back(buf);
      }
    }
    return c;
  }

 private:
  std::vector<double> deltas_;
  std::vector<double> direct_;
  std::vector<double> ratio_;
  std::vector<char> seen_;
};

std::vector<double> checked_deltas(const std::vector<double>& deltas) {
  require(!deltas.empty(), "modulus: no deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    require(deltas[i] > 0 && std::isfinite(deltas[i]), "modulus: deltas must be positive");
    require(i == 0 || deltas[i] > deltas[i - 1], "modulus: deltas must be increasing");
  }
  return deltas;
}

}  // namespace

bool ModulusCurve::monotone(double tol) const {
  for (std::size_t i = 1; i < delta.size(); ++i) {
    double scale = tol * (1.0 + std::abs(omega[i]));
    if (omega[i] < omega[i - 1] - scale) return false;
    if (omega[i] / delta[i] > omega[i - 1] / delta[i - 1] + scale / delta[i]) return false;
  }
  return true;
}

double ModulusCurve::at(double d) const {
  require(!delta.empty(), "modulus curve: empty");
  if (d <= delta.front()) return omega.front() * d / delta.front();
  if (d >= delta.back()) return omega.back();
  std::size_t k = std::lower_bound(delta.begin(), delta.end(), d) - delta.begin();
  double t = (d - delta[k - 1]) / (delta[k] - delta[k - 1]);
  return (1 - t) * omega[k - 1] + t * omega[k];
}

ModulusCurve modulus(const PLConvexFunction& u, const std::vector<double>& deltas,
                     const std::vector<Vec>& extra_points, const std::vector<double>& extra_values) {
  require(extra_points.size() == extra_values.size(), "modulus: extra point/value count mismatch");
  Accumulator acc(checked_deltas(deltas));
  auto sweep = [&](const Vec& x, double ux) {
    for (Index j = 0; j < u.size(); ++j) acc.add((x - u.node(j)).norm(), ux - u.value(j));
  };
  std::vector<Index> bnd = u.boundary_indices();
  require(!bnd.empty() || !extra_points.empty(), "modulus: no boundary nodes");
  for (Index b : bnd) sweep(u.node(b), u.value(b));
  for (std::size_t k = 0; k < extra_points.size(); ++k) sweep(extra_points[k], extra_values[k]);
  return acc.finish();
}

ZeroDataModulus modulus_zero_data(const PLConvexFunction& u, const std::vector<double>& deltas) {
  double scale = 1.0 + u.values().cwiseAbs().maxCoeff();
  for (Index b : u.boundary_indices())
    if (std::abs(u.value(b)) > 1e-12 * scale) throw InvalidArgument("modulus_zero_data: boundary values are not zero");
  ZeroDataModulus out;
  std::vector<Vec> feet;
  for (Index i : u.interior_indices()) feet.push_back(geometry::nearest_boundary_point(u.node(i), u.domain()));
  out.pairwise = modulus(u, deltas, feet, std::vector<double>(feet.size(), 0.0));

  Accumulator acc(checked_deltas(deltas));
  acc.mark_all_seen();
  for (Index i : u.interior_indices()) acc.add(u.boundary_distance(i), -u.value(i));
  out.distance = acc.finish();
  out.distance.warnings.clear();
  for (std::size_t k = 0; k < deltas.size(); ++k)
    out.discrepancy = std::max(out.discrepancy, std::abs(out.pairwise.omega[k] - out.distance.omega[k]));
  return out;
}

std::vector<double> geometric_deltas(double lo, double hi, int count) {
  require(lo > 0 && hi > lo && count >= 2, "geometric_deltas: need 0 < lo < hi and count >= 2");
  std::vector<double> d(count);
  for (int k = 0; k < count; ++k) d[k] = lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1));
  d.back() = hi;
  return d;
}

}  // namespace ma::convexfn
