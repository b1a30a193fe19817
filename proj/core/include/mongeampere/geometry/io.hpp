#pragma once

#include "mongeampere/geometry/polytope.hpp"

#include <iosfwd>
#include <string>

namespace ma::geometry {

// Plain-text polytope format:
//
//   # comment
//   dimension <n>
//   vertices <m>
//   <x_1> ... <x_n>            (m rows)
//   halfspaces <k>
//   <a_1> ... <a_n> <offset>   (k rows, a . x <= offset)
//
// Either section may be omitted; when both are present they must agree.

ConvexPolytope read_polytope(std::istream& in);
ConvexPolytope read_polytope_file(const std::string& path);
void write_polytope(std::ostream& out, const ConvexPolytope& p);

std::string volume_json(const ConvexPolytope& p);
std::string affine_map_json(const AffineMap& map);

}  // namespace ma::geometry
