#pragma once

#include "mongeampere/convexfn/pl_function.hpp"

namespace ma::convexfn {

struct MeasureDiagnostics {
  Index box_expansions = 0;
  /// Constraints found only by the final all-node scan.
  Index scan_additions = 0;
  /// Interior nodes lying strictly above the envelope.
  Index empty_interior_cells = 0;
  /// Planes that touch a cell without cutting it (degenerate lifts).
  Index touching_planes = 0;
};

struct MAMeasure {
  Vec mass;  // zero at boundary nodes
  double total = 0.0;
  MeasureDiagnostics diagnostics;
  std::vector<Cell> cells;  // filled when requested
};

struct MeasureOptions {
  const std::vector<std::vector<Index>>* candidates = nullptr;
  bool exact = true;
  bool keep_cells = false;
  /// With keep_cells: store cell vertices too, not only facets.
  bool keep_vertices = true;
};

MAMeasure ma_measure(const PLConvexFunction& u, const MeasureOptions& opts = {});

}  // namespace ma::convexfn
