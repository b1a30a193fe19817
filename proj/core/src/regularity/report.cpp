#include "mongeampere/regularity/report.hpp"

#include <cmath>

namespace ma::regularity {

bool RegularityReport::valid() const {
  if (holder && !(holder->alpha > 0.0 && holder->alpha <= 1.0)) return false;
  if (amp && !amp->margin.allFinite()) return false;
  if (holder_bound && !std::isfinite(holder_bound->min_margin)) return false;
  for (const auto& s : sobolev)
    if (!std::isfinite(s.value) || !std::isfinite(s.bound)) return false;
  return true;
}

}  // namespace ma::regularity
