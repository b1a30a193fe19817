#pragma once

#include "mongeampere/convexfn/pl_function.hpp"

namespace ma::convexfn {

/// Lower convex envelope on the hull of the points; boundary nodes are the
/// points on the hull boundary. Returned values are the envelope values.
PLConvexFunction convex_envelope(const std::vector<Vec>& points, const Vec& values);

/// Same nodes, values lowered to the envelope.
PLConvexFunction convex_envelope(const PLConvexFunction& u);

std::vector<char> active_flags(const PLConvexFunction& u, double tol = 1e-12);

}  // namespace ma::convexfn
