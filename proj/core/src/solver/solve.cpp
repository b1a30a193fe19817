#include "mongeampere/solver/solve.hpp"

#include "../convexfn/cell_builder.hpp"

#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>

namespace ma::solver {
namespace {

class State {
 public:
  State(const MAProblem& p, const SolveOptions& o)
      : p_(p), m_(*p.mesh), opts_(o), target_(target_masses(p)), cand_(m_.neighbours()) {
    for (Index i = 0; i < m_.size(); ++i)
      if (!m_.is_boundary(i)) interior_.push_back(i);
    double mean = 0.0;
    Index positive = 0;
    for (Index i : interior_)
      if (target_(i) > 0) {
        mean += target_(i);
        ++positive;
      }
    mean = positive ? mean / positive : 1.0;
    scale_ = Vec::Ones(m_.size());
    for (Index i : interior_) scale_(i) = target_(i) > 0 ? target_(i) : mean;
    slot_.assign(m_.size(), -1);
    for (std::size_t k = 0; k < interior_.size(); ++k) slot_[interior_[k]] = static_cast<Index>(k);
  }

  const Vec& target() const { return target_; }
  const std::vector<Index>& interior() const { return interior_; }

  // full measure with facets; merges new facet neighbours into the candidate lists
  // Candidate-only measures overestimate masses; `exact` adds the all-node scan.
  convexfn::MAMeasure measure(const Vec& u, bool exact = true) {
    convexfn::PLConvexFunction f(m_.node_set(), u);
    convexfn::MeasureOptions mo;
    mo.candidates = &cand_;
    mo.exact = exact;
    mo.keep_cells = true;
    mo.keep_vertices = false;
    auto r = convexfn::ma_measure(f, mo);
    for (Index i : interior_)
      for (const auto& [j, area] : r.cells[i].facets) {
        auto& c = cand_[i];
        if (std::find(c.begin(), c.end(), j) == c.end()) c.push_back(j);
      }
    return r;
  }

  double relative(const Vec& mass, double* over = nullptr) const {
    double worst = 0.0, up = -std::numeric_limits<double>::infinity();
    for (Index i : interior_) {
      double r = (mass(i) - target_(i)) / scale_(i);
      worst = std::max(worst, std::abs(r));
      up = std::max(up, r);
    }
    if (over) *over = up;
    return worst;
  }

  bool all_active(const Vec& mass) const {
    for (Index i : interior_)
      if (target_(i) > 0 && !(mass(i) > 0)) return false;
    return true;
  }

  // sum of squared relative residuals of mass^{1/n}
  double merit(const Vec& mass) const {
    const double n = m_.dim();
    double acc = 0.0;
    for (Index i : interior_) {
      double t = std::pow(scale_(i), 1.0 / n);
      double r = (std::pow(target_(i), 1.0 / n) - std::pow(std::max(mass(i), 0.0), 1.0 / n)) / t;
      acc += r * r;
    }
    return acc;
  }

  double cell_mass(const Vec& u, Index i, double v) const {
    convexfn::detail::BuildRequest req;
    req.x = m_.nodes()[i];
    req.value = v;
    req.self = i;
    req.candidates = &cand_[i];
    req.exact = false;
    req.geometry = false;
    auto raw = convexfn::detail::build_cell(m_.nodes(), u, req);
    return raw.empty ? 0.0 : raw.volume;
  }

  // Lowers u_i until its cell mass lies in [goal (1 - acc), goal].
  void lower_node(Vec& u, Index i, double goal, double acc) const {
    double m0 = cell_mass(u, i, u(i));
    if (m0 >= goal * (1.0 - acc)) return;
    double h = std::numeric_limits<double>::infinity();
    for (Index j : m_.neighbours()[i]) h = std::min(h, (m_.nodes()[j] - m_.nodes()[i]).norm());
    double hi = u(i), step = 1e-8 * h * (1.0 + std::abs(u(i)));
    double lo = hi - step;
    int guard = 0;
    while (cell_mass(u, i, lo) < goal) {
      hi = lo;
      step *= 4.0;
      lo = hi - step;
      if (++guard > 200) throw Error("solver: cannot bracket a node value");
    }
    for (int it = 0; it < 200; ++it) {
      double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      double mm = cell_mass(u, i, mid);
      if (mm > goal)
        lo = mid;
      else
        hi = mid;
      if (mm <= goal && mm >= goal * (1.0 - acc)) break;
    }
    u(i) = hi;
  }

  void sweep(Vec& u, double fraction, double acc) const {
    for (Index i : interior_)
      if (target_(i) > 0) lower_node(u, i, fraction * target_(i), acc);
  }

  // Newton direction: solve K d = target - mass with K = -dm/du, clamp to d <= 0.
  bool newton_direction(const Vec& u, const convexfn::MAMeasure& mm, Vec& dir) const {
    const Index n_int = static_cast<Index>(interior_.size());
    std::vector<Eigen::Triplet<double>> trip;
    Vec diag = Vec::Zero(n_int);
    for (Index k = 0; k < n_int; ++k) {
      Index i = interior_[k];
      for (const auto& [j, area] : mm.cells[i].facets) {
        double w = area / (m_.nodes()[j] - m_.nodes()[i]).norm();
        diag(k) += w;
        if (slot_[j] >= 0) trip.emplace_back(k, slot_[j], -0.5 * w), trip.emplace_back(slot_[j], k, -0.5 * w);
      }
    }
    double reg = 1e-12 * std::max(diag.maxCoeff(), 1e-300);
    for (Index k = 0; k < n_int; ++k) trip.emplace_back(k, k, diag(k) + reg);
    Eigen::SparseMatrix<double> K(n_int, n_int);
    K.setFromTriplets(trip.begin(), trip.end());
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
    if (ldlt.info() != Eigen::Success) return false;
    Vec rhs(n_int);
    // Newton on mass^{1/n}, which is concave along lowering directions
    const double n = m_.dim();
    for (Index k = 0; k < n_int; ++k) {
      double t = target_(interior_[k]), m = mm.mass(interior_[k]);
      rhs(k) = m > 0 ? n * std::pow(m, 1.0 - 1.0 / n) * (std::pow(t, 1.0 / n) - std::pow(m, 1.0 / n)) : t - m;
    }
    Vec d = ldlt.solve(rhs);
    if (ldlt.info() != Eigen::Success || !d.allFinite()) return false;
    dir = Vec::Zero(u.size());
    for (Index k = 0; k < n_int; ++k) dir(interior_[k]) = std::min(0.0, -d(k));
    return true;
  }

 private:
  const MAProblem& p_;
  const Mesh& m_;
  const SolveOptions& opts_;
  Vec target_;
  Vec scale_;
  std::vector<std::vector<Index>> cand_;
  std::vector<Index> interior_;
  std::vector<Index> slot_;
};

void check_monotone(const Vec& before, const Vec& after) {
  if ((after - before).maxCoeff() > 0.0) throw Error("solver: iterate increased at a node");
}

}  // namespace

SolveReport solve(const MAProblem& problem, const SolveOptions& opts) {
  require(opts.tol > 0 && opts.max_iters >= 0, "solve: tolerance must be positive");
  validate(problem);
  State st(problem, opts);
  auto env = boundary_envelope(problem);
  Vec u = env.values();
  SolveReport rep{env, st.target(), Vec::Zero(u.size()), Vec::Zero(u.size()), 0.0, 0.0, 0, 0, 0, {}, {}};
  rep.tolerance = opts.tol;

  auto finish = [&](const convexfn::MAMeasure& mm) {
    rep.solution = env.with_values(u);
    rep.mass = mm.mass;
    rep.residual = Vec::Zero(u.size());
    for (Index i : st.interior()) rep.residual(i) = mm.mass(i) - st.target()(i);
    rep.max_residual = st.relative(mm.mass);
    rep.diagnostics = mm.diagnostics;
  };

  bool all_zero = true;
  for (Index i : st.interior()) all_zero = all_zero && st.target()(i) == 0.0;
  auto mm = st.measure(u);
  if (all_zero) {
    finish(mm);
    if (rep.max_residual > opts.tol) throw ConvergenceError("solver: boundary envelope carries mass", rep.max_residual, 0);
    return rep;
  }

  // u = env + t psi with psi = -(geometric mean of facet slacks): strictly
  // convex, zero on the boundary, so every interior cell is full dimensional
  {
    const Mesh& mesh = *problem.mesh;
    const auto& hs = mesh.domain().halfspaces();
    Vec psi = Vec::Zero(u.size());
    for (Index i : st.interior()) {
      double acc = 0.0;
      for (const auto& h : hs) acc += std::log(std::max(h.slack(mesh.nodes()[i]), 1e-300));
      psi(i) = -std::exp(acc / static_cast<double>(hs.size()));
    }
    const double n = problem.dim();
    double t = 1.0;
    bool found = false;
    for (int k = 0; k < 100 && !found; ++k) {
      Vec trial = env.values() + t * psi;
      mm = st.measure(trial);
      double ratio = 0.0;
      bool empty = false;
      for (Index i : st.interior()) {
        if (st.target()(i) > 0) ratio = std::max(ratio, mm.mass(i) / st.target()(i));
        empty = empty || mm.mass(i) <= 0.0;
      }
      if (ratio <= 1.0 && !empty) {
        u = trial;
        found = true;
        break;
      }
      if (ratio <= 1.0) throw Error("solver: bootstrap produced an empty cell");
      t *= std::min(0.5, std::pow(0.9 / ratio, 1.0 / n));
    }
    if (!found) throw Error("solver: no admissible starting point");
    ++rep.iterations;
    mm = st.measure(u);
    rep.history.push_back(st.relative(mm.mass));
  }

  double over = 0.0;
  double res = st.relative(mm.mass, &over);
  int polish = 0, stalled = 0;
  double last_alpha = 1.0;
  // true when the all-node scan confirms convergence
  auto verified = [&]() {
    mm = st.measure(u, true);
    res = st.relative(mm.mass, &over);
    return mm.diagnostics.scan_additions == 0 && res <= opts.tol;
  };
  while (true) {
    if (res <= opts.tol && polish >= opts.polish_steps) {
      if (verified()) break;
      polish = 0;
    }
    if (rep.iterations >= opts.max_iters) {
      if (res <= opts.tol && verified()) break;
      finish(mm);
      throw ConvergenceError("solver: no convergence within the iteration limit", res, rep.iterations);
    }
    if (res <= opts.tol) ++polish;
    ++rep.iterations;
    Vec dir;
    bool moved = false;
    const double phi = st.merit(mm.mass);
    if (st.newton_direction(u, mm, dir)) {
      for (double alpha = std::min(1.0, 4.0 * last_alpha); alpha > 1e-9; alpha *= 0.5) {
        Vec trial = u + alpha * dir;
        auto tm = st.measure(trial);
        double t_over = 0.0;
        double t_res = st.relative(tm.mass, &t_over);
        if (t_over <= 0.5 * opts.tol && st.all_active(tm.mass) && st.merit(tm.mass) < phi) {
          check_monotone(u, trial);
          u = std::move(trial);
          mm = std::move(tm);
          res = t_res;
          moved = true;
          last_alpha = alpha;
          ++rep.newton_steps;
          break;
        }
      }
    }
    if (!moved) {
      if (res <= opts.tol) {
        if (verified()) break;
        polish = 0;
        continue;
      }
      Vec before = u;
      st.sweep(u, 1.0, 0.25 * opts.tol);
      check_monotone(before, u);
      ++rep.sweeps;
      mm = st.measure(u);
      double prev = res;
      res = st.relative(mm.mass, &over);
      stalled = res < prev ? 0 : stalled + 1;
      if (stalled >= 10) {
        finish(mm);
        throw ConvergenceError("solver: stalled", res, rep.iterations);
      }
    }
    rep.history.push_back(res);
  }
  finish(mm);
  return rep;
}

}  // namespace ma::solver
