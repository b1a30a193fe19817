#pragma once

#include "mongeampere/solver/problem.hpp"
#include "mongeampere/solver/solve.hpp"

#include <json.hpp>

#include <initializer_list>
#include <string>

namespace ma::solver::detail {

using nlohmann::json;

/// Throws ConfigError naming the first key of `j` not in `allowed`.
void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where);

double get_number(const json& j, const char* key, const std::string& where);
double get_number(const json& j, const char* key, double fallback, const std::string& where);
int get_int(const json& j, const char* key, const std::string& where);
int get_int(const json& j, const char* key, int fallback, const std::string& where);
std::string get_string(const json& j, const char* key, const std::string& where);
Vec get_vector(const json& j, const std::string& where);

struct DomainSpec {
  geometry::ConvexPolytope polytope;
  bool is_box = false;
  Vec lo, hi;
};

DomainSpec parse_domain(const json& j, const std::string& base_dir);
std::vector<double> parse_axis(const json& j, double lo, double hi, const std::string& where);
Mesh parse_mesh(const json& j, const DomainSpec& domain);
Field parse_density(const json& j);
/// Boundary data; table data is resolved against the mesh node order.
Vec parse_boundary(const json& j, const Mesh& mesh);
SolveOptions parse_solve_options(const json& j);

/// Problem object without the schema field.
MAProblem parse_problem_body(const json& j, const std::string& base_dir, SolveOptions* opts);

}  // namespace ma::solver::detail
