#pragma once
// Weighted gradient integrals of piecewise-linear functions on meshes.

#include "mongeampere/solver/mesh.hpp"

#include <vector>

namespace ma::regularity {

/// Gradient of the linear interpolant on simplex s.
Vec simplex_gradient(const solver::Mesh& mesh, const Vec& values, Index s);

/// sum over simplices of |grad u|^p dist(centroid)^beta |T|.
double gradient_integral(const solver::Mesh& mesh, const Vec& values, double p, double beta = 0.0);

/// Largest gradient norm over all simplices.
double max_gradient(const solver::Mesh& mesh, const Vec& values);

struct SobolevCheck {
  double p = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  /// (1 - alpha) p - beta
  double q = 0.0;
  double holder_constant = 0.0;
  /// radius of a ball containing the domain
  double R = 0.0;
  /// largest distance to the boundary
  double r = 0.0;
  double value = 0.0;
  /// |S^{n-1}| R^{n-1} C_H^p r^{1-q} / (1-q)
  double bound = 0.0;
  bool within = false;
};

/// Integral with its closed-form bound. Throws InvalidArgument when q >= 1
/// (use divergence_check there).
SobolevCheck sobolev_integral(const solver::Mesh& mesh, const Vec& values, double p, double beta,
                              double alpha, double holder_constant);

struct LevelNorm {
  Index nodes = 0;
  double first_layer = 0.0;
  /// ||grad u||_p^p
  double value = 0.0;
  double max_gradient = 0.0;
};

struct DivergenceReport {
  double p = 0.0;
  double factor = 0.0;
  std::vector<LevelNorm> levels;
  std::vector<double> ratios;
  std::vector<double> max_gradient_ratios;
  /// every consecutive ratio >= factor
  bool growing = false;
  bool max_gradient_growing = false;
  /// ratio at the finest pair
  double last_ratio = 0.0;
};

/// Growth of ||grad u||_p^p (and max |grad u|) across refinement levels,
/// ordered coarse to fine. Throws InvalidArgument with fewer than 3 levels.
DivergenceReport divergence_check(const std::vector<LevelNorm>& levels, double p, double factor = 1.2);

LevelNorm level_norm(const solver::Mesh& mesh, const Vec& values, double p);

}  // namespace ma::regularity
