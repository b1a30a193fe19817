#pragma once

#include "mongeampere/solver/solve.hpp"

#include <iosfwd>
#include <string>

namespace ma::solver {

inline constexpr const char* kProblemSchema = "mongeampere.problem/1";

struct ProblemFile {
  std::string name;
  MAProblem problem;
  SolveOptions options;
};

/// JSON problem record:
///   {"schema": "mongeampere.problem/1", "name": ..., "domain": {...},
///    "mesh": {...}, "f": {...}, "g": {...}, "Lambda": x, "lambda": x,
///    "solver": {"tol": x, "max_iters": n, "polish_steps": n}}
/// Unknown fields are rejected with ConfigError. Relative file paths are
/// resolved against base_dir.
ProblemFile parse_problem(const std::string& json_text, const std::string& base_dir = ".");
ProblemFile read_problem_file(const std::string& path);

/// Summary without per-node data.
std::string report_json(const SolveReport& report, const std::string& name = "");

/// node,boundary,x_1..x_n,value,target,mass,residual
void write_solution_csv(std::ostream& out, const SolveReport& report);

}  // namespace ma::solver
