#pragma once

#include "mongeampere/convexfn/measure.hpp"
#include "mongeampere/convexfn/modulus.hpp"

#include <iosfwd>

namespace ma::convexfn {

// Node table: a polytope block (see geometry/io.hpp) followed by
//
//   nodes <m>
//   <b|i> <x_1> ... <x_n> <value>
//
// where b marks boundary nodes.

PLConvexFunction read_function(std::istream& in);
void write_function(std::ostream& out, const PLConvexFunction& u);

/// node,boundary,x_1..x_n,mass
void write_measure_csv(std::ostream& out, const PLConvexFunction& u, const MAMeasure& m);
/// delta,omega
void write_modulus_csv(std::ostream& out, const ModulusCurve& c);

}  // namespace ma::convexfn
