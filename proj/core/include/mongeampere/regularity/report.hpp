#pragma once

#include "mongeampere/convexfn/modulus.hpp"
#include "mongeampere/regularity/amp.hpp"
#include "mongeampere/regularity/converse.hpp"
#include "mongeampere/regularity/fit.hpp"
#include "mongeampere/regularity/sobolev.hpp"

#include <optional>
#include <vector>

namespace ma::regularity {

/// Everything measured on one experiment; absent parts were not requested.
struct RegularityReport {
  convexfn::ModulusCurve modulus;
  std::optional<HolderFit> holder;
  std::optional<AmpReport> amp;
  std::optional<ModulusBound> holder_bound;
  std::vector<SobolevCheck> sobolev;
  std::optional<DivergenceReport> divergence;
  std::optional<ConverseProfile> converse;
  std::optional<LogProbe> probe;

  /// Fitted alpha in (0, 1] and every recorded margin finite.
  bool valid() const;
};

}  // namespace ma::regularity
