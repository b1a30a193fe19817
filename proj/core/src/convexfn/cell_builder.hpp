#pragma once

#include "mongeampere/convexfn/pl_function.hpp"

#include <vector>

namespace ma::convexfn::detail {

struct RawCell {
  bool empty = true;
  bool bounded = true;
  double volume = 0.0;
  std::vector<Vec> vertices;
  std::vector<std::pair<Index, double>> facets;
  Index expansions = 0;
  Index scan_additions = 0;
  Index touching = 0;
};

struct BuildRequest {
  Vec x;
  double value = 0.0;
  Index self = -1;
  /// Planes tried first; all of `pool` when null.
  const std::vector<Index>* candidates = nullptr;
  /// Node indices eligible at all; every node when null.
  const std::vector<Index>* pool = nullptr;
  bool exact = true;
  bool geometry = true;
  /// With geometry: also return the cell vertices (facets alone otherwise).
  bool vertices = true;
  /// Accept cells that never stop touching the box (boundary points).
  bool allow_unbounded = false;
};

RawCell build_cell(const std::vector<Vec>& nodes, const Vec& values, const BuildRequest& req);

/// Nodes in the surrounding buckets of a uniform bucket grid.
std::vector<std::vector<Index>> proximity_candidates(const std::vector<Vec>& nodes);

/// Largest v with a nonempty cell at (x, v); the envelope value at x.
double envelope_by_bisection(const std::vector<Vec>& nodes, const Vec& values, const Vec& x,
                             Index self, double upper, const std::vector<Index>* pool,
                             const std::vector<Index>* candidates = nullptr);

}  // namespace ma::convexfn::detail
