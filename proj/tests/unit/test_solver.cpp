#include <doctest.h>

#include "mongeampere/convexfn/measure.hpp"
#include "mongeampere/solver/checks.hpp"
#include "mongeampere/solver/io.hpp"
#include "mongeampere/solver/mesh.hpp"
#include "mongeampere/solver/solve.hpp"

#include <cmath>
#include <random>
#include <set>
#include <sstream>

using namespace ma;
using namespace ma::solver;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

std::shared_ptr<const Mesh> square(int cells, double exponent = 1.0) {
  auto ax = exponent == 1.0 ? uniform_axis(0, 1, cells) : power_axis(0, 1, cells, exponent);
  return std::make_shared<const Mesh>(Mesh::tensor({ax, ax}));
}

double one(const Vec&) { return 1.0; }
double zero(const Vec&) { return 0.0; }

}  // namespace

TEST_CASE("axis generators") {
  auto u = uniform_axis(-1, 3, 8);
  CHECK(u.size() == 9);
  CHECK(u[4] == doctest::Approx(1.0));
  auto p = power_axis(0, 2, 10, 2.0);
  CHECK(p[1] == doctest::Approx(0.02));
  CHECK(p.back() == 2.0);
  auto g = geometric_axis(0, 1, 12, 1e-3);
  CHECK(g[1] == doctest::Approx(1e-3));
  double ratio = (g[2] - g[1]) / (g[1] - g[0]);
  for (std::size_t k = 2; k + 1 < g.size(); ++k)
    CHECK((g[k + 1] - g[k]) / (g[k] - g[k - 1]) == doctest::Approx(ratio).epsilon(1e-9));
  CHECK(g.back() == 1.0);
  auto c = chebyshev_axis(0, 1, 6);
  for (std::size_t k = 1; k < c.size(); ++k) CHECK(c[k] > c[k - 1]);
  CHECK_THROWS_AS(power_axis(0, 1, 4, 0.5), InvalidArgument);
  CHECK_THROWS_AS(geometric_axis(0, 1, 10, 0.2), InvalidArgument);
  CHECK_THROWS_AS(uniform_axis(1, 0, 3), InvalidArgument);
}

TEST_CASE("Kuhn tensor meshes tile the box") {
  for (int n = 1; n <= 4; ++n) {
    std::vector<std::vector<double>> axes;
    for (int k = 0; k < n; ++k) axes.push_back(power_axis(0, 1.0 + k, 3, 1.3));
    Mesh m = Mesh::tensor(axes);
    int fact = 1;
    for (int k = 2; k <= n; ++k) fact *= k;
    CHECK(m.simplex_count() == static_cast<Index>(std::pow(3, n)) * fact);
    CHECK(std::abs(m.coverage_defect()) < 1e-12 * m.domain().volume());
    Index interior = 0;
    for (Index i = 0; i < m.size(); ++i) interior += !m.is_boundary(i);
    CHECK(interior == static_cast<Index>(std::pow(2, n)));
    for (Index i = 0; i < m.size(); ++i)
      for (Index j : m.neighbours()[i]) {
        const auto& nj = m.neighbours()[j];
        CHECK(std::find(nj.begin(), nj.end(), i) != nj.end());
      }
  }
}

TEST_CASE("polygon meshes cover the polygon") {
  auto poly = geometry::ConvexPolytope::regular_polygon(7, 1.0);
  Mesh m = Mesh::polygon(poly, 0.15);
  CHECK(std::abs(m.coverage_defect()) < 1e-10);
  CHECK(m.max_edge() < 0.4);
  for (const auto& v : poly.vertices()) {
    bool found = false;
    for (const auto& x : m.nodes()) found = found || (x - v).norm() < 1e-12;
    CHECK(found);
  }
  CHECK_THROWS_AS(Mesh::polygon(geometry::ConvexPolytope::unit_cube(3), 0.1), InvalidArgument);
}

TEST_CASE("interpolation reproduces affine functions") {
  auto m = square(5, 1.4);
  Vec vals(m->size());
  for (Index i = 0; i < m->size(); ++i) vals(i) = 2 * m->nodes()[i](0) - m->nodes()[i](1) + 0.3;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (int k = 0; k < 50; ++k) {
    Vec x = v2(U(rng), U(rng));
    CHECK(m->interpolate(vals, x) == doctest::Approx(2 * x(0) - x(1) + 0.3).epsilon(1e-12));
  }
  CHECK(m->locate(v2(1.5, 0.5)) == -1);
  auto moved = m->transformed(geometry::AffineMap(Mat::Identity(2, 2) * 2.0, v2(1, 1)));
  CHECK(moved.domain().volume() == doctest::Approx(4.0));
  CHECK(moved.locate(v2(2.0, 2.0)) >= 0);
}

TEST_CASE("target masses") {
  auto m = square(10);
  auto p0 = MAProblem::make(m, zero, zero);
  CHECK(target_masses(p0).cwiseAbs().maxCoeff() == 0.0);

  auto p1 = MAProblem::make(m, one, zero);
  Vec t = target_masses(p1);
  CHECK(t.sum() == doctest::Approx(1.0).epsilon(1e-14));
  double interior = 0.0;
  for (Index i = 0; i < m->size(); ++i)
    if (!m->is_boundary(i)) {
      CHECK(t(i) == doctest::Approx(0.01).epsilon(1e-12));
      interior += t(i);
    }
  CHECK(interior == doctest::Approx(0.81));

  auto p2 = MAProblem::make(m, [](const Vec& x) { return 1.0 + x(0); }, zero);
  CHECK(target_masses(p2).sum() == doctest::Approx(1.5).epsilon(1e-13));
  // interior totals approach the integral under refinement
  double prev = 1.0;
  for (int cells : {8, 16, 32}) {
    auto mm = square(cells, 1.3);
    Vec tt = target_masses(MAProblem::make(mm, [](const Vec& x) { return 1.0 + x(0); }, zero));
    double s = 0.0;
    for (Index i = 0; i < mm->size(); ++i)
      if (!mm->is_boundary(i)) s += tt(i);
    CHECK(std::abs(s - 1.5) < prev);
    prev = std::abs(s - 1.5);
  }
  auto bad = MAProblem::make(m, [](const Vec& x) { return x(0) - 0.5; }, zero);
  CHECK_THROWS_AS(target_masses(bad), InvalidArgument);
}

TEST_CASE("problem validation") {
  auto m = square(6);
  CHECK_THROWS_AS(validate(MAProblem::make(m, [](const Vec& x) { return x(0) - 0.5; }, zero)), InvalidArgument);
  CHECK_THROWS_AS(validate(MAProblem::make(m, one, zero, 0.5)), InvalidArgument);
  CHECK_THROWS_AS(validate(MAProblem::make(m, one, zero, 2.0, 1.5)), InvalidArgument);
  CHECK_NOTHROW(validate(MAProblem::make(m, one, zero, 1.0, 1.0)));
  // concave boundary data
  CHECK_THROWS_AS(validate(MAProblem::make(m, one, [](const Vec& x) { return -(x - v2(0.5, 0.5)).squaredNorm(); })),
                  InvalidArgument);
  CHECK_NOTHROW(validate(MAProblem::make(m, one, [](const Vec& x) { return (x - v2(0.2, 0.9)).squaredNorm(); })));
  CHECK(boundary_data_affine(MAProblem::make(m, one, [](const Vec& x) { return x(0) - 3 * x(1); })));
  CHECK_FALSE(boundary_data_affine(MAProblem::make(m, one, [](const Vec& x) { return x.squaredNorm(); })));
}

TEST_CASE("zero density returns the boundary envelope") {
  auto m = square(6, 1.5);
  auto p = MAProblem::make(m, zero, [](const Vec& x) { return 2 * x(0) + x(1) - 1; });
  auto r = solve(p);
  CHECK(r.iterations == 0);
  for (Index i = 0; i < m->size(); ++i) {
    const Vec& x = m->nodes()[i];
    CHECK(r.solution.value(i) == doctest::Approx(2 * x(0) + x(1) - 1).epsilon(1e-12));
  }
  CHECK(r.max_residual <= 1e-12);
}

TEST_CASE("manufactured quadratic solution") {
  std::vector<double> errors;
  for (int cells : {6, 12, 24}) {
    auto m = square(cells, 1.5);
    auto p = MAProblem::make(m, one, [](const Vec& x) { return 0.5 * x.squaredNorm(); });
    auto r = solve(p);
    CHECK(r.max_residual <= 1e-9);
    double err = 0.0;
    for (Index i = 0; i < m->size(); ++i) err = std::max(err, std::abs(r.solution.value(i) - 0.5 * m->nodes()[i].squaredNorm()));
    errors.push_back(err);
  }
  CHECK(errors[0] < 5e-2);
  CHECK(errors[1] < errors[0]);
  CHECK(errors[2] < errors[1]);
  // uniform Kuhn grids reproduce the quadratic exactly
  auto m = square(8);
  auto r = solve(MAProblem::make(m, one, [](const Vec& x) { return 0.5 * x.squaredNorm(); }));
  for (Index i = 0; i < m->size(); ++i)
    CHECK(r.solution.value(i) == doctest::Approx(0.5 * m->nodes()[i].squaredNorm()).epsilon(1e-9));
}

TEST_CASE("disc approximation: center value near -1/2") {
  auto poly = geometry::ConvexPolytope::regular_polygon(64, 1.0);
  auto m = std::make_shared<const Mesh>(Mesh::polygon(poly, 0.1));
  auto r = solve(MAProblem::make(m, one, zero));
  double centre = convexfn::evaluate(r.solution, Vec::Zero(2));
  CHECK(std::abs(centre + 0.5) < 2e-2);
}

TEST_CASE("solution invariants") {
  auto m = square(10, 1.3);
  auto p = MAProblem::make(m, [](const Vec& x) { return 1.0 + x(0) * x(1); }, [](const Vec& x) { return 0.3 * x(0); });
  auto r = solve(p);
  auto env = boundary_envelope(p);
  for (Index i = 0; i < m->size(); ++i) {
    CHECK(r.solution.value(i) <= env.value(i) + 1e-14);
    if (m->is_boundary(i)) CHECK(r.solution.value(i) == p.g(i));
    else CHECK(std::abs(r.residual(i)) <= 1e-9 * r.target(i));
  }
  auto exact = convexfn::ma_measure(r.solution);
  for (Index i = 0; i < m->size(); ++i)
    if (!m->is_boundary(i)) CHECK(exact.mass(i) == doctest::Approx(r.target(i)).epsilon(1e-9));
  CHECK(exact.diagnostics.empty_interior_cells == 0);
}

TEST_CASE("doubling the density by 2^n doubles zero-data solutions") {
  auto m = square(8, 1.4);
  auto a = solve(MAProblem::make(m, one, zero));
  auto b = solve(MAProblem::make(m, [](const Vec&) { return 4.0; }, zero));
  CHECK((b.solution.values() - 2.0 * a.solution.values()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("comparison principle") {
  auto m = square(8, 1.3);
  auto g = [](const Vec& x) { return 0.5 * x(0) - 0.2 * x(1); };
  auto u = solve(MAProblem::make(m, one, g));
  auto v = solve(MAProblem::make(m, zero, g));
  auto rep = comparison_check(u.solution, v.solution);
  CHECK(rep.pass);
  CHECK(rep.worst_gap == 0.0);
  for (Index i = 0; i < m->size(); ++i)
    if (!m->is_boundary(i)) CHECK(u.solution.value(i) < v.solution.value(i));
  auto same = comparison_check(u.solution, u.solution);
  CHECK(same.pass);
  // reversed order violates the mass precondition, not the conclusion logic
  auto rev = comparison_check(v.solution, u.solution);
  CHECK_FALSE(rev.mass_ok);
  CHECK_FALSE(rev.pass);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0, 1);
  for (int trial = 0; trial < 3; ++trial) {
    double c1 = U(rng), c2 = U(rng), s = U(rng), lift = 0.1 * U(rng);
    Vec a = v2(U(rng) - 0.5, U(rng) - 0.5);
    auto f_big = [c1, c2](const Vec& x) { return 1.0 + c1 + c2 * x(0); };
    auto f_small = [c2](const Vec& x) { return 1.0 + c2 * x(0) * x(1); };
    auto g_low = [a, s](const Vec& x) { return a.dot(x) + s * x.squaredNorm(); };
    auto g_high = [a, s, lift](const Vec& x) { return a.dot(x) + s * x.squaredNorm() + lift; };
    auto uu = solve(MAProblem::make(m, f_big, g_low));
    auto vv = solve(MAProblem::make(m, f_small, g_high));
    auto r = comparison_check(uu.solution, vv.solution, 1e-9, &uu.mass, &vv.mass);
    CHECK(r.preconditions_ok);
    CHECK(r.conclusion_ok);
  }
}

TEST_CASE("affine equivariance") {
  auto m = square(6, 1.3);
  auto p = MAProblem::make(m, [](const Vec& x) { return 1.0 + x(0); }, [](const Vec& x) { return 0.2 * x(1); });
  auto id = affine_equivariance_check(p, geometry::AffineMap::identity(2), 1.0);
  CHECK(id.pass);
  CHECK(id.max_difference == 0.0);

  geometry::AffineMap twice(2.0 * Mat::Identity(2, 2), Vec::Zero(2));
  CHECK(normalized_scale(twice) == doctest::Approx(4.0));
  auto dbl = affine_equivariance_check(p, twice, normalized_scale(twice));
  CHECK(dbl.pass);

  Mat shear(2, 2);
  shear << 1.0, 0.7, 0.0, 1.0;
  geometry::AffineMap sh(shear, v2(0.3, -1.0));
  auto r = affine_equivariance_check(p, sh, 1.0);
  CHECK(r.pass);
  CHECK(r.max_difference <= r.threshold);
  // the doubled solution is 4 u, not 2 u
  Vec diff = dbl.transformed.solution.values() - 2.0 * dbl.original.solution.values();
  CHECK(diff.cwiseAbs().maxCoeff() > 1e-2);
}

TEST_CASE("iteration limit raises a convergence error") {
  auto m = square(8, 1.3);
  SolveOptions o;
  o.max_iters = 2;
  try {
    solve(MAProblem::make(m, one, zero), o);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.residual() > 1e-9);
    CHECK(e.iterations() == 2);
  }
}

TEST_CASE("three dimensional solve") {
  auto ax = uniform_axis(0, 1, 4);
  auto m = std::make_shared<const Mesh>(Mesh::tensor({ax, ax, ax}));
  auto r = solve(MAProblem::make(m, one, [](const Vec& x) { return 0.5 * x.squaredNorm(); }));
  for (Index i = 0; i < m->size(); ++i)
    CHECK(r.solution.value(i) == doctest::Approx(0.5 * m->nodes()[i].squaredNorm()).epsilon(1e-9));
}

TEST_CASE("problem files") {
  const std::string text = R"({
    "schema": "mongeampere.problem/1",
    "name": "square",
    "domain": {"kind": "unit_cube", "dim": 2},
    "mesh": {"kind": "tensor", "axes": [{"kind": "power", "cells": 6, "exponent": 1.5},
                                         {"kind": "uniform", "cells": 6}]},
    "f": {"kind": "affine", "value": 1, "gradient": [1, 0]},
    "g": {"kind": "quadratic", "scale": 0.5},
    "Lambda": 2,
    "solver": {"tol": 1e-10}
  })";
  auto pf = parse_problem(text);
  CHECK(pf.name == "square");
  CHECK(pf.options.tol == 1e-10);
  CHECK(pf.problem.mesh->size() == 49);
  CHECK(pf.problem.f(v2(0.5, 0.2)) == doctest::Approx(1.5));
  auto r = solve(pf.problem, pf.options);
  std::ostringstream csv;
  write_solution_csv(csv, r);
  CHECK(csv.str().rfind("node,boundary,x1,x2,value,target,mass,residual\n", 0) == 0);
  CHECK(report_json(r, pf.name).find("\"max_residual\"") != std::string::npos);

  CHECK_THROWS_AS(parse_problem(R"({"schema": "mongeampere.problem/1", "bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_problem(R"({"schema": "other/2"})"), ConfigError);
  CHECK_THROWS_AS(parse_problem("{not json"), ConfigError);
  std::string unknown_axis = text;
  unknown_axis.replace(unknown_axis.find("\"power\""), 7, "\"spiral\"");
  CHECK_THROWS_AS(parse_problem(unknown_axis), ConfigError);

  auto poly = parse_problem(R"({"schema": "mongeampere.problem/1",
    "domain": {"kind": "regular_polygon", "sides": 6},
    "mesh": {"kind": "delaunay", "h": 0.3},
    "f": {"kind": "constant", "value": 1}, "g": {"kind": "zero"}})");
  CHECK(std::abs(poly.problem.mesh->coverage_defect()) < 1e-10);
  CHECK_THROWS_AS(parse_problem(R"({"schema": "mongeampere.problem/1",
    "domain": {"kind": "regular_polygon", "sides": 6},
    "mesh": {"kind": "tensor", "axis": {"kind": "uniform", "cells": 3}},
    "f": {"kind": "constant", "value": 1}, "g": {"kind": "zero"}})"), ConfigError);
}
