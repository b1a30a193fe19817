#include "json_spec.hpp"

#include "mongeampere/geometry/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace ma::solver::detail {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : j.items()) {
    bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(where + ": unknown field '" + item.key() + "'");
  }
}

double get_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(where + ": field '" + key + "' must be a number");
  return j.at(key).get<double>();
}

double get_number(const json& j, const char* key, double fallback, const std::string& where) {
  return j.contains(key) ? get_number(j, key, where) : fallback;
}

int get_int(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + ": missing field '" + key + "'");
  if (!j.at(key).is_number_integer()) throw ConfigError(where + ": field '" + key + "' must be an integer");
  return j.at(key).get<int>();
}

int get_int(const json& j, const char* key, int fallback, const std::string& where) {
  return j.contains(key) ? get_int(j, key, where) : fallback;
}

std::string get_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_string()) throw ConfigError(where + ": missing string field '" + key + "'");
  return j.at(key).get<std::string>();
}

Vec get_vector(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ": expected a nonempty array of numbers");
  Vec v(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (!j[k].is_number()) throw ConfigError(where + ": expected numbers");
    v(k) = j[k].get<double>();
  }
  return v;
}

DomainSpec parse_domain(const json& j, const std::string& base_dir) {
  const std::string w = "domain";
  const std::string kind = get_string(j, "kind", w);
  DomainSpec d{geometry::ConvexPolytope::unit_cube(1), false, Vec(), Vec()};
  if (kind == "box") {
    check_keys(j, {"kind", "lo", "hi"}, w);
    d.lo = get_vector(j.at("lo"), w + ".lo");
    d.hi = get_vector(j.at("hi"), w + ".hi");
    if (d.lo.size() != d.hi.size()) throw ConfigError(w + ": lo and hi differ in length");
    d.polytope = geometry::ConvexPolytope::box(d.lo, d.hi);
    d.is_box = true;
  } else if (kind == "unit_cube") {
    check_keys(j, {"kind", "dim"}, w);
    int n = get_int(j, "dim", w);
    if (n < 1) throw ConfigError(w + ": dim must be positive");
    d.lo = Vec::Zero(n);
    d.hi = Vec::Ones(n);
    d.polytope = geometry::ConvexPolytope::unit_cube(n);
    d.is_box = true;
  } else if (kind == "regular_polygon") {
    check_keys(j, {"kind", "sides", "radius"}, w);
    d.polytope = geometry::ConvexPolytope::regular_polygon(get_int(j, "sides", w), get_number(j, "radius", 1.0, w));
  } else if (kind == "vertices") {
    check_keys(j, {"kind", "points"}, w);
    std::vector<Vec> pts;
    if (!j.contains("points") || !j.at("points").is_array()) throw ConfigError(w + ": missing points");
    for (const auto& row : j.at("points")) pts.push_back(get_vector(row, w + ".points"));
    d.polytope = geometry::ConvexPolytope::from_vertices(pts);
  } else if (kind == "file") {
    check_keys(j, {"kind", "path"}, w);
    std::string path = get_string(j, "path", w);
    if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
    d.polytope = geometry::read_polytope_file(path);
  } else {
    throw ConfigError(w + ": unknown kind '" + kind + "'");
  }
  return d;
}

std::vector<double> parse_axis(const json& j, double lo, double hi, const std::string& w) {
  const std::string kind = get_string(j, "kind", w);
  const int cells = get_int(j, "cells", w);
  if (cells < 1) throw ConfigError(w + ": cells must be positive");
  bool toward_hi = false;
  if (j.contains("toward")) {
    std::string t = get_string(j, "toward", w);
    if (t != "lo" && t != "hi") throw ConfigError(w + ": toward must be 'lo' or 'hi'");
    toward_hi = t == "hi";
  }
  std::vector<double> ax;
  if (kind == "uniform") {
    check_keys(j, {"kind", "cells"}, w);
    ax = uniform_axis(lo, hi, cells);
  } else if (kind == "power") {
    check_keys(j, {"kind", "cells", "exponent", "toward"}, w);
    ax = power_axis(lo, hi, cells, get_number(j, "exponent", w));
  } else if (kind == "geometric") {
    check_keys(j, {"kind", "cells", "first", "toward"}, w);
    ax = geometric_axis(lo, hi, cells, get_number(j, "first", w));
  } else if (kind == "chebyshev") {
    check_keys(j, {"kind", "cells"}, w);
    ax = chebyshev_axis(lo, hi, cells);
  } else {
    throw ConfigError(w + ": unknown axis kind '" + kind + "'");
  }
  if (toward_hi) {
    std::vector<double> r(ax.size());
    for (std::size_t k = 0; k < ax.size(); ++k) r[k] = lo + hi - ax[ax.size() - 1 - k];
    ax = r;
  }
  return ax;
}

Mesh parse_mesh(const json& j, const DomainSpec& d) {
  const std::string w = "mesh";
  const std::string kind = get_string(j, "kind", w);
  if (kind == "tensor") {
    check_keys(j, {"kind", "axes", "axis"}, w);
    if (!d.is_box) throw ConfigError(w + ": tensor meshes need a box domain");
    const int n = static_cast<int>(d.lo.size());
    std::vector<std::vector<double>> axes;
    if (j.contains("axes")) {
      if (!j.at("axes").is_array() || static_cast<int>(j.at("axes").size()) != n)
        throw ConfigError(w + ": axes must list one entry per dimension");
      for (int k = 0; k < n; ++k) axes.push_back(parse_axis(j.at("axes")[k], d.lo(k), d.hi(k), w + ".axes"));
    } else if (j.contains("axis")) {
      for (int k = 0; k < n; ++k) axes.push_back(parse_axis(j.at("axis"), d.lo(k), d.hi(k), w + ".axis"));
    } else {
      throw ConfigError(w + ": tensor mesh needs 'axes' or 'axis'");
    }
    return Mesh::tensor(axes);
  }
  if (kind == "delaunay") {
    check_keys(j, {"kind", "h"}, w);
    if (d.polytope.dim() != 2) throw ConfigError(w + ": delaunay meshes are two dimensional");
    double h = get_number(j, "h", w);
    if (!(h > 0)) throw ConfigError(w + ": h must be positive");
    return Mesh::polygon(d.polytope, h);
  }
  throw ConfigError(w + ": unknown kind '" + kind + "'");
}

namespace {

Field affine_field(const json& j, const std::string& w) {
  check_keys(j, {"kind", "value", "gradient"}, w);
  double c = get_number(j, "value", 0.0, w);
  Vec a = j.contains("gradient") ? get_vector(j.at("gradient"), w + ".gradient") : Vec();
  return [c, a](const Vec& x) {
    if (a.size() == 0) return c;
    if (a.size() != x.size()) throw InvalidArgument("gradient length differs from the dimension");
    return c + a.dot(x);
  };
}

}  // namespace

Field parse_density(const json& j) {
  const std::string w = "f";
  const std::string kind = get_string(j, "kind", w);
  if (kind == "constant") {
    check_keys(j, {"kind", "value"}, w);
    double c = get_number(j, "value", w);
    return [c](const Vec&) { return c; };
  }
  if (kind == "affine") return affine_field(j, w);
  if (kind == "table") {
    check_keys(j, {"kind", "points", "values"}, w);
    if (!j.contains("points") || !j.contains("values")) throw ConfigError(w + ": table needs points and values");
    std::vector<Vec> pts;
    for (const auto& row : j.at("points")) pts.push_back(get_vector(row, w + ".points"));
    Vec vals = get_vector(j.at("values"), w + ".values");
    if (static_cast<Index>(pts.size()) != vals.size()) throw ConfigError(w + ": table size mismatch");
    return [pts, vals](const Vec& x) {
      Index best = 0;
      double d = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < pts.size(); ++k) {
        double e = (pts[k] - x).squaredNorm();
        if (e < d) d = e, best = static_cast<Index>(k);
      }
      return vals(best);
    };
  }
  throw ConfigError(w + ": unknown kind '" + kind + "'");
}

Vec parse_boundary(const json& j, const Mesh& mesh) {
  const std::string w = "g";
  const std::string kind = get_string(j, "kind", w);
  Field g;
  if (kind == "zero") {
    check_keys(j, {"kind"}, w);
    g = [](const Vec&) { return 0.0; };
  } else if (kind == "constant") {
    check_keys(j, {"kind", "value"}, w);
    double c = get_number(j, "value", w);
    g = [c](const Vec&) { return c; };
  } else if (kind == "affine") {
    g = affine_field(j, w);
  } else if (kind == "quadratic") {
    check_keys(j, {"kind", "scale", "center"}, w);
    double s = get_number(j, "scale", 0.5, w);
    Vec c = j.contains("center") ? get_vector(j.at("center"), w + ".center") : Vec::Zero(mesh.dim());
    if (c.size() != mesh.dim()) throw ConfigError(w + ": center has the wrong length");
    g = [s, c](const Vec& x) { return s * (x - c).squaredNorm(); };
  } else if (kind == "table") {
    check_keys(j, {"kind", "values"}, w);
    Vec vals = get_vector(j.at("values"), w + ".values");
    Vec out = Vec::Zero(mesh.size());
    Index k = 0;
    for (Index i = 0; i < mesh.size(); ++i)
      if (mesh.is_boundary(i)) {
        if (k >= vals.size()) throw ConfigError(w + ": table shorter than the boundary node count");
        out(i) = vals(k++);
      }
    if (k != vals.size()) throw ConfigError(w + ": table longer than the boundary node count");
    return out;
  } else {
    throw ConfigError(w + ": unknown kind '" + kind + "'");
  }
  Vec out = Vec::Zero(mesh.size());
  for (Index i = 0; i < mesh.size(); ++i)
    if (mesh.is_boundary(i)) out(i) = g(mesh.nodes()[i]);
  return out;
}

SolveOptions parse_solve_options(const json& j) {
  const std::string w = "solver";
  check_keys(j, {"tol", "max_iters", "polish_steps"}, w);
  SolveOptions o;
  o.tol = get_number(j, "tol", o.tol, w);
  o.max_iters = get_int(j, "max_iters", o.max_iters, w);
  o.polish_steps = get_int(j, "polish_steps", o.polish_steps, w);
  if (!(o.tol > 0)) throw ConfigError(w + ": tol must be positive");
  if (o.max_iters < 0 || o.polish_steps < 0) throw ConfigError(w + ": iteration counts must be nonnegative");
  return o;
}

MAProblem parse_problem_body(const json& j, const std::string& base_dir, SolveOptions* opts) {
  if (!j.contains("domain") || !j.contains("mesh") || !j.contains("f") || !j.contains("g"))
    throw ConfigError("problem: domain, mesh, f and g are required");
  DomainSpec d = parse_domain(j.at("domain"), base_dir);
  MAProblem p;
  p.mesh = std::make_shared<const Mesh>(parse_mesh(j.at("mesh"), d));
  p.f = parse_density(j.at("f"));
  p.g = parse_boundary(j.at("g"), *p.mesh);
  if (j.contains("Lambda")) p.Lambda = get_number(j, "Lambda", "problem");
  if (j.contains("lambda")) p.lambda = get_number(j, "lambda", "problem");
  if (opts) *opts = j.contains("solver") ? parse_solve_options(j.at("solver")) : SolveOptions{};
  return p;
}

}  // namespace ma::solver::detail
