#pragma once

#include "mongeampere/convexfn/pl_function.hpp"
#include "mongeampere/solver/mesh.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <optional>

namespace ma::solver {

using Field = std::function<double(const Vec&)>;

/// Dirichlet problem det D^2 u = f, u = g on the boundary of the mesh domain.
struct MAProblem {
  std::shared_ptr<const Mesh> mesh;
  Field f;
  /// Values at every node; only boundary entries are used.
  Vec g;
  /// Upper bound on f; the sampled maximum when left infinite.
  double Lambda = std::numeric_limits<double>::infinity();
  std::optional<double> lambda;

  static MAProblem make(std::shared_ptr<const Mesh> mesh, Field f, const Field& g,
                        double Lambda = std::numeric_limits<double>::infinity(),
                        std::optional<double> lambda = std::nullopt);

  const Mesh& grid() const { return *mesh; }
  int dim() const { return mesh->dim(); }
};

/// Checks the sampled bounds on f and the convexity of the boundary data.
/// Throws InvalidArgument on violation.
void validate(const MAProblem& problem);

/// Per node: sum over incident simplices T of |T| f(centroid T) / (n + 1).
/// Boundary entries are returned as well; the solver ignores them.
Vec target_masses(const MAProblem& problem);

/// Largest sampled value of f.
double sampled_max(const MAProblem& problem);

/// True when g agrees with an affine function at the boundary nodes.
bool boundary_data_affine(const MAProblem& problem, double tol = 1e-12);

/// Envelope of the boundary data evaluated at every node (the f = 0 solution).
convexfn::PLConvexFunction boundary_envelope(const MAProblem& problem);

}  // namespace ma::solver
