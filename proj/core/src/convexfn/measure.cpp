#include "mongeampere/convexfn/measure.hpp"

#include "cell_builder.hpp"

namespace ma::convexfn {

MAMeasure ma_measure(const PLConvexFunction& u, const MeasureOptions& opts) {
  require(!opts.candidates || static_cast<Index>(opts.candidates->size()) == u.size(),
          "ma_measure: candidate list size mismatch");
  MAMeasure m;
  m.mass = Vec::Zero(u.size());
  std::vector<std::vector<Index>> near;
  const std::vector<std::vector<Index>>* cand = opts.candidates;
  if (!cand && u.size() > 64) {
    near = detail::proximity_candidates(u.nodes());
    cand = &near;
  }
  if (opts.keep_cells) m.cells.resize(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    if (u.is_boundary(i)) continue;
    detail::BuildRequest req;
    req.x = u.node(i);
    req.value = u.value(i);
    req.self = i;
    req.candidates = cand ? &(*cand)[i] : nullptr;
    req.exact = opts.exact || !opts.candidates;
    req.geometry = opts.keep_cells;
    req.vertices = opts.keep_vertices;
    auto raw = detail::build_cell(u.nodes(), u.values(), req);
    m.diagnostics.box_expansions += raw.expansions;
    m.diagnostics.scan_additions += raw.scan_additions;
    m.diagnostics.touching_planes += raw.touching;
    if (raw.empty) {
      ++m.diagnostics.empty_interior_cells;
      continue;
    }
    m.mass(i) = raw.volume;
    if (opts.keep_cells) {
      Cell& c = m.cells[i];
      c.empty = false;
      c.bounded = raw.bounded;
      c.volume = raw.volume;
      c.vertices = std::move(raw.vertices);
      c.facets = std::move(raw.facets);
    }
  }
  m.total = m.mass.sum();
  return m;
}

}  // namespace ma::convexfn
