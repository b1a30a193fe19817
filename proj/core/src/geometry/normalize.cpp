#include "mongeampere/geometry/normalize.hpp"

#include <cmath>

namespace ma::geometry {
namespace {

struct Mvee {
  Vec center;
  Mat shape;  // E = { x : (x-c)^T shape (x-c) <= 1 }
  int iterations;
  double residual;
};

// Khachiyan's iteration with Todd-Yildirim away steps on the lifted points.
Mvee khachiyan(const std::vector<Vec>& pts, double tol, int max_iter) {
  const int n = static_cast<int>(pts[0].size());
  const int m = static_cast<int>(pts.size());
  const double d = n + 1.0;
  Mat q(n + 1, m);
  for (int i = 0; i < m; ++i) {
    q.col(i).head(n) = pts[i];
    q(n, i) = 1.0;
  }
  Vec u = Vec::Constant(m, 1.0 / m);
  Vec mvals(m);
  double residual = 0.0;
  int it = 0;
  for (; it < max_iter; ++it) {
    Mat x = q * u.asDiagonal() * q.transpose();
    Eigen::LDLT<Mat> ldlt(x);
    Mat sol = ldlt.solve(q);
    for (int i = 0; i < m; ++i) mvals(i) = q.col(i).dot(sol.col(i));
    int j = 0;
    mvals.maxCoeff(&j);
    int k = -1;
    for (int i = 0; i < m; ++i)
      if (u(i) > 0 && (k < 0 || mvals(i) < mvals(k))) k = i;
    double up = mvals(j) / d - 1.0;
    double down = 1.0 - mvals(k) / d;
    residual = std::max(up, down);
    if (residual <= tol) break;
    if (up >= down) {
      double beta = (mvals(j) - d) / (d * (mvals(j) - 1.0));
      u *= 1.0 - beta;
      u(j) += beta;
    } else {
      double beta = (mvals(k) - d) / (d * (mvals(k) - 1.0));
      if (u(k) < 1.0) beta = std::max(beta, -u(k) / (1.0 - u(k)));
      u *= 1.0 - beta;
      u(k) += beta;
      if (u(k) < 1e-300) u(k) = 0.0;
    }
  }
  Vec c = Vec::Zero(n);
  for (int i = 0; i < m; ++i) c += u(i) * pts[i];
  Mat cov = Mat::Zero(n, n);
  for (int i = 0; i < m; ++i) cov += u(i) * (pts[i] - c) * (pts[i] - c).transpose();
  return {c, (n * cov).inverse(), it, residual};
}

}  // namespace

Normalization normalize(const ConvexPolytope& p, const NormalizeOptions& opts) {
  require(opts.tolerance > 0 && opts.max_iterations > 0, "normalize: bad options");
  const int n = p.dim();
  double tol = opts.tolerance;
  int used = 0;
  Normalization best{AffineMap::identity(n), -1e300, -1e300, 0};
  while (used < opts.max_iterations) {
    Mvee e = khachiyan(p.vertices(), tol, opts.max_iterations - used);
    used += e.iterations + 1;
    Eigen::SelfAdjointEigenSolver<Mat> es(e.shape);
    Mat root = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
               es.eigenvectors().transpose();
    AffineMap base(root, -(root * e.center));
    ConvexPolytope img = p.transformed(base);
    double r_in = std::numeric_limits<double>::infinity();
    for (const auto& h : img.halfspaces()) r_in = std::min(r_in, h.offset);
    double r_out = img.enclosing_radius(Vec::Zero(n));
    require(r_in > 0, "normalize: ellipsoid center outside polytope");
    double lo = 1.0 / r_in, hi = n / r_out;
    double s = lo <= hi ? std::sqrt(lo * hi) : lo;
    AffineMap map = AffineMap::scaling(n, s).compose(base);
    Normalization out{map, s * r_in - 1.0, n - s * r_out, used};
    if (std::min(out.inner_margin, out.outer_margin) > std::min(best.inner_margin, best.outer_margin))
      best = out;
    if (best.inner_margin >= -1e-8 && best.outer_margin >= -1e-8) return best;
    if (tol < 1e-14) break;
    tol *= 0.01;
  }
  throw ConvergenceError("normalize: inclusions B_1 in LP in B_n not reached",
                         -std::min(best.inner_margin, best.outer_margin), used);
}

}  // namespace ma::geometry
