#pragma once

#include "mongeampere/convexfn/measure.hpp"
#include "mongeampere/solver/problem.hpp"

#include <vector>

namespace ma::solver {

struct SolveOptions {
  /// Bound on |mass - target| / target at interior nodes.
  double tol = 1e-9;
  int max_iters = 200;
  /// Extra Newton steps taken after convergence while they keep improving.
  int polish_steps = 3;
};

struct SolveReport {
  convexfn::PLConvexFunction solution;
  Vec target;
  Vec mass;
  /// mass - target; zero at boundary nodes.
  Vec residual;
  /// Largest |mass - target| / scale over interior nodes.
  double max_residual = 0.0;
  double tolerance = 0.0;
  int iterations = 0;
  int newton_steps = 0;
  int sweeps = 0;
  /// max relative residual after each iteration
  std::vector<double> history;
  convexfn::MeasureDiagnostics diagnostics;
};

/// Discrete Alexandrov solution: PL convex u with u = g on boundary nodes and
/// subgradient cell volumes equal to target_masses at interior nodes. Iterates
/// decrease pointwise from the boundary envelope. Throws ConvergenceError.
SolveReport solve(const MAProblem& problem, const SolveOptions& opts = {});

}  // namespace ma::solver
