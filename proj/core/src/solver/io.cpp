#include "mongeampere/solver/io.hpp"

#include "json_spec.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

namespace ma::solver {

ProblemFile parse_problem(const std::string& text, const std::string& base_dir) {
  detail::json j;
  try {
    j = detail::json::parse(text);
  } catch (const detail::json::parse_error& e) {
    throw ConfigError(std::string("problem: invalid JSON: ") + e.what());
  }
  detail::check_keys(j, {"schema", "name", "domain", "mesh", "f", "g", "Lambda", "lambda", "solver"}, "problem");
  if (detail::get_string(j, "schema", "problem") != kProblemSchema)
    throw ConfigError(std::string("problem: schema must be '") + kProblemSchema + "'");
  ProblemFile pf{j.contains("name") ? detail::get_string(j, "name", "problem") : "", {}, {}};
  pf.problem = detail::parse_problem_body(j, base_dir, &pf.options);
  return pf;
}

ProblemFile read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open problem file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto slash = path.find_last_of('/');
  return parse_problem(ss.str(), slash == std::string::npos ? "." : path.substr(0, slash));
}

std::string report_json(const SolveReport& r, const std::string& name) {
  detail::json j;
  j["name"] = name;
  j["nodes"] = r.solution.size();
  j["interior_nodes"] = r.solution.interior_indices().size();
  j["iterations"] = r.iterations;
  j["newton_steps"] = r.newton_steps;
  j["sweeps"] = r.sweeps;
  j["max_residual"] = r.max_residual;
  j["tolerance"] = r.tolerance;
  j["history"] = r.history;
  j["min_value"] = r.solution.values().minCoeff();
  j["diagnostics"] = {{"box_expansions", r.diagnostics.box_expansions},
                      {"scan_additions", r.diagnostics.scan_additions},
                      {"empty_interior_cells", r.diagnostics.empty_interior_cells},
                      {"touching_planes", r.diagnostics.touching_planes}};
  return j.dump(2);
}

void write_solution_csv(std::ostream& out, const SolveReport& r) {
  const auto& u = r.solution;
  out << "node,boundary";
  for (int k = 0; k < u.dim(); ++k) out << ",x" << k + 1;
  out << ",value,target,mass,residual\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    out << ',' << buf;
  };
  for (Index i = 0; i < u.size(); ++i) {
    out << i << ',' << (u.is_boundary(i) ? 1 : 0);
    for (int k = 0; k < u.dim(); ++k) num(u.node(i)(k));
    num(u.value(i));
    num(u.is_boundary(i) ? 0.0 : r.target(i));
    num(r.mass(i));
    num(r.residual(i));
    out << '\n';
  }
}

}  // namespace ma::solver
