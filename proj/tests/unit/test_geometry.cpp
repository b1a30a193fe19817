#include <doctest.h>

#include "mongeampere/geometry/cylinder.hpp"
#include "mongeampere/geometry/io.hpp"
#include "mongeampere/geometry/normalize.hpp"
#include "mongeampere/geometry/polytope.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace ma;
using namespace ma::geometry;

namespace {

Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

Vec v3(double a, double b, double c) {
  Vec v(3);
  v << a, b, c;
  return v;
}

// Shoelace area of the convex hull of the vertex list (vertices sorted by angle).
double shoelace(std::vector<Vec> pts) {
  Vec c = Vec::Zero(2);
  for (auto& p : pts) c += p;
  c /= pts.size();
  std::sort(pts.begin(), pts.end(), [&](const Vec& a, const Vec& b) {
    return std::atan2(a(1) - c(1), a(0) - c(0)) < std::atan2(b(1) - c(1), b(0) - c(0));
  });
  double s = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Vec& p = pts[i];
    const Vec& q = pts[(i + 1) % pts.size()];
    s += p(0) * q(1) - p(1) * q(0);
  }
  return 0.5 * std::abs(s);
}

// Nearest point on the boundary polygon, by projecting onto every segment.
Vec brute_project_2d(const Vec& x, const ConvexPolytope& p) {
  if (p.contains(x, 0.0)) return x;
  Vec best = p.vertices()[0];
  for (std::size_t k = 0; k < p.halfspaces().size(); ++k) {
    const auto& f = p.facet_vertices(k);
    const Vec& a = p.vertices()[f[0]];
    const Vec& b = p.vertices()[f[1]];
    double t = std::clamp((x - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
    Vec y = a + t * (b - a);
    if ((y - x).norm() < (best - x).norm()) best = y;
  }
  return best;
}

}  // namespace

TEST_CASE("unit square both representations") {
  auto sq = ConvexPolytope::unit_cube(2);
  CHECK(sq.vertices().size() == 4);
  CHECK(sq.halfspaces().size() == 4);
  CHECK(sq.volume() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(sq.surface_area() == doctest::Approx(4.0));
  CHECK(sq.consistency_defect() <= 1e-12);
  CHECK(sq.enclosing_radius(sq.vertex_centroid()) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("cube and simplex volumes in 3D and 4D") {
  CHECK(ConvexPolytope::unit_cube(3).volume() == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(ConvexPolytope::unit_cube(3).surface_area() == doctest::Approx(6.0).epsilon(1e-13));
  CHECK(ConvexPolytope::unit_cube(4).volume() == doctest::Approx(1.0).epsilon(1e-13));
  std::vector<Vec> simplex{v3(0, 0, 0), v3(1, 0, 0), v3(0, 1, 0), v3(0, 0, 1)};
  auto t = ConvexPolytope::from_vertices(simplex);
  CHECK(t.volume() == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
  CHECK(t.halfspaces().size() == 4);
}

TEST_CASE("random 2D hulls agree with the shoelace formula") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Vec> pts;
    for (int i = 0; i < 30; ++i) pts.push_back(v2(g(rng), g(rng)));
    auto p = ConvexPolytope::from_vertices(pts);
    CHECK(p.volume() == doctest::Approx(shoelace(p.vertices())).epsilon(1e-12));
    CHECK(p.consistency_defect() <= 1e-12);
    for (const auto& x : pts) CHECK(p.contains(x, 1e-12));
  }
}

TEST_CASE("random 3D hull volume against Monte Carlo") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<Vec> pts;
  for (int i = 0; i < 25; ++i) pts.push_back(v3(u(rng), u(rng), u(rng)));
  auto p = ConvexPolytope::from_vertices(pts);
  for (const auto& x : pts) CHECK(p.contains(x, 1e-10));
  int hit = 0;
  const int samples = 200000;
  for (int i = 0; i < samples; ++i)
    if (p.contains(v3(u(rng), u(rng), u(rng)))) ++hit;
  double mc = 8.0 * hit / samples;
  CHECK(p.volume() == doctest::Approx(mc).epsilon(0.02));
}

TEST_CASE("degenerate inputs rejected") {
  CHECK_THROWS_AS(ConvexPolytope::from_vertices({v2(0, 0), v2(1, 1), v2(2, 2)}), DegenerateInput);
  std::vector<Halfspace> halfplane{{v2(1, 0), 1.0}};
  CHECK_THROWS_AS(ConvexPolytope::from_halfspaces(halfplane), DegenerateInput);
  std::vector<Halfspace> empty{{v2(1, 0), 0.0}, {v2(-1, 0), -1.0}, {v2(0, 1), 1}, {v2(0, -1), 1}};
  CHECK_THROWS_AS(ConvexPolytope::from_halfspaces(empty), DegenerateInput);
}

TEST_CASE("redundant halfspaces dropped") {
  std::vector<Halfspace> hs{{v2(1, 0), 1}, {v2(-1, 0), 0}, {v2(0, 1), 1}, {v2(0, -1), 0}, {v2(1, 1) / std::sqrt(2.0), 5}};
  auto p = ConvexPolytope::from_halfspaces(hs);
  CHECK(p.halfspaces().size() == 4);
}

TEST_CASE("inner body of a right triangle") {
  auto tri = ConvexPolytope::from_vertices({v2(0, 0), v2(1, 0), v2(0, 1)});
  auto ib = inner_body(tri, 0.1);
  REQUIRE(ib.status == InnerBodyStatus::Nonempty);
  // offset lines x = 0.1, y = 0.1, x + y = 1 - 0.1 sqrt 2
  double c = 1 - 0.1 * std::sqrt(2.0);
  std::vector<Vec> expect{v2(0.1, 0.1), v2(c - 0.1, 0.1), v2(0.1, c - 0.1)};
  for (const auto& e : expect) {
    double d = 1e9;
    for (const auto& v : ib.body->vertices()) d = std::min(d, (v - e).norm());
    CHECK(d < 1e-12);
  }
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  int mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    Vec x = v2(u(rng), u(rng));
    if (x(0) + x(1) > 1) continue;
    double dist = std::min({x(0), x(1), (1 - x(0) - x(1)) / std::sqrt(2.0)});
    if ((dist >= 0.1) != ib.body->contains(x, 0.0) && std::abs(dist - 0.1) > 1e-12) ++mismatches;
  }
  CHECK(mismatches == 0);
}

TEST_CASE("inner body edge cases") {
  auto sq = ConvexPolytope::unit_cube(2);
  auto zero = inner_body(sq, 0.0);
  REQUIRE(zero.status == InnerBodyStatus::Nonempty);
  CHECK(zero.body->volume() == doctest::Approx(1.0));
  CHECK(inner_body(sq, 0.5).status == InnerBodyStatus::MeasureZero);
  CHECK(inner_body(sq, 0.6).status == InnerBodyStatus::Empty);
  CHECK_THROWS_AS(inner_body(sq, -0.1), InvalidArgument);
  // monotone in h
  double prev = 2.0;
  for (int k = 0; k < 10; ++k) {
    auto ib = inner_body(sq, 0.05 * k);
    REQUIRE(ib.status == InnerBodyStatus::Nonempty);
    double v = ib.body->volume();
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("projection") {
  auto sq = ConvexPolytope::unit_cube(2);
  Vec y = project(v2(2, 0.5), sq);
  CHECK((y - v2(1, 0.5)).norm() < 1e-14);
  CHECK((project(v2(0.3, 0.4), sq) - v2(0.3, 0.4)).norm() == 0.0);
  CHECK((project(v2(3, 3), sq) - v2(1, 1)).norm() < 1e-14);

  auto poly = ConvexPolytope::regular_polygon(7, 1.0);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g(0, 2);
  for (int i = 0; i < 1000; ++i) {
    Vec a = v2(g(rng), g(rng)), b = v2(g(rng), g(rng));
    Vec pa = project(a, poly), pb = project(b, poly);
    CHECK((pa - brute_project_2d(a, poly)).norm() < 1e-10);
    CHECK((pa - pb).norm() <= (a - b).norm() + 1e-12);
  }
}

TEST_CASE("projection in 3D against the KKT conditions") {
  auto cube = ConvexPolytope::unit_cube(3);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g(0.5, 2);
  for (int i = 0; i < 200; ++i) {
    Vec x = v3(g(rng), g(rng), g(rng));
    Vec y = project(x, cube);
    Vec clamp = x.cwiseMax(0.0).cwiseMin(1.0);
    CHECK((y - clamp).norm() < 1e-12);
  }
}

TEST_CASE("layer volumes on the unit square") {
  auto sq = ConvexPolytope::unit_cube(2);
  for (auto [a, b] : {std::pair{0.1, 0.2}, std::pair{0.05, 0.3}}) {
    double lv = layer_volume(sq, a, b);
    CHECK(std::abs(lv - 4 * (b - a) * (1 - a - b)) <= 1e-10);
    CHECK(lv <= layer_volume_bound(2, std::sqrt(0.5), a, b));
  }
  CHECK(layer_volume(sq, 0.1, 0.2) == doctest::Approx(0.28));
  CHECK(layer_volume_bound(2, std::sqrt(0.5), 0.1, 0.2) == doctest::Approx(0.4443).epsilon(1e-3));
  double ab = layer_volume(sq, 0.02, 0.13), bc = layer_volume(sq, 0.13, 0.41);
  CHECK(std::abs(layer_volume(sq, 0.02, 0.41) - ab - bc) <= 1e-10);
  CHECK(layer_volume(sq, 0.4, 0.7) == doctest::Approx(0.04));
  CHECK_THROWS_AS(layer_volume(sq, 0.3, 0.2), InvalidArgument);
}

TEST_CASE("sphere areas") {
  CHECK(sphere_area(2) == doctest::Approx(2 * std::numbers::pi));
  CHECK(sphere_area(3) == doctest::Approx(4 * std::numbers::pi));
  CHECK(sphere_area(4) == doctest::Approx(2 * std::numbers::pi * std::numbers::pi));
}

TEST_CASE("affine maps") {
  Mat a(2, 2);
  a << 2, 1, 0.5, 3;
  AffineMap m(a, v2(1, -2));
  CHECK(m.inverse_defect() <= 1e-12);
  CHECK(m.det() == doctest::Approx(5.5));
  Vec x = v2(0.3, 0.7);
  CHECK((m.inverse().apply(m.apply(x)) - x).norm() < 1e-14);
  Mat s = Mat::Zero(2, 2);
  s(0, 0) = 1;
  CHECK_THROWS_AS(AffineMap(s, v2(0, 0)), DegenerateInput);
  auto sq = ConvexPolytope::unit_cube(2).transformed(m);
  CHECK(sq.volume() == doctest::Approx(5.5).epsilon(1e-13));
  CHECK(sq.consistency_defect() <= 1e-12);
}

TEST_CASE("normalization") {
  auto check = [](const ConvexPolytope& p) {
    auto nz = normalize(p);
    auto img = p.transformed(nz.map);
    const int n = p.dim();
    for (const auto& h : img.halfspaces()) CHECK(h.offset >= 1.0 - 1e-8);
    for (const auto& v : img.vertices()) CHECK(v.norm() <= n + 1e-8);
    CHECK(nz.inner_margin >= -1e-8);
    CHECK(nz.outer_margin >= -1e-8);
  };
  auto sq = ConvexPolytope::unit_cube(2);
  check(sq);
  auto img = sq.transformed(normalize(sq).map);
  CHECK(img.vertex_centroid().norm() < 1e-6);
  CHECK(img.enclosing_radius(Vec::Zero(2)) <= 2.0);
  check(ConvexPolytope::regular_polygon(64, 3.0));
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  for (int t = 0; t < 3; ++t) {
    check(ConvexPolytope::from_vertices({v2(g(rng), g(rng)), v2(g(rng), g(rng)), v2(g(rng), g(rng))}));
    check(ConvexPolytope::from_vertices(
        {v3(g(rng), g(rng), g(rng)), v3(g(rng), g(rng), g(rng)), v3(g(rng), g(rng), g(rng)), v3(g(rng), g(rng), g(rng))}));
  }
  check(ConvexPolytope::unit_cube(3));
}

TEST_CASE("cylinder") {
  Cylinder c(2, 1.0, std::sqrt(2.0));
  CHECK(c.contains(v2(0.5, 1.0)));
  CHECK_FALSE(c.contains(v2(0.0, 0.5)));
  CHECK(c.contains_closed(v2(0.0, 0.5)));
  CHECK(c.inscribed_polytope().volume() == doctest::Approx(2 * std::sqrt(2.0)));
  Cylinder c3(3, 2.0, 1.0);
  double prism = c3.inscribed_polytope(32).volume();
  CHECK(prism == doctest::Approx(2.0 * 0.5 * 32 * std::sin(2 * std::numbers::pi / 32)).epsilon(1e-12));
  CHECK_THROWS_AS(Cylinder(2, -1.0, 1.0), InvalidArgument);
}

TEST_CASE("text round trip") {
  auto p = ConvexPolytope::regular_polygon(5, 1.3);
  std::stringstream ss;
  write_polytope(ss, p);
  auto q = read_polytope(ss);
  CHECK(q.volume() == doctest::Approx(p.volume()).epsilon(1e-15));
  std::istringstream only_h("# square\ndimension 2\nhalfspaces 4\n1 0 1\n-1 0 0\n0 1 1\n0 -1 0\n");
  CHECK(read_polytope(only_h).volume() == doctest::Approx(1.0));
  std::istringstream bad("dimension 2\nvertices 3\n0 0\n1 0\n0 1\nhalfspaces 3\n1 0 1\n-1 0 0\n0 -1 0\n");
  CHECK_THROWS(read_polytope(bad));
  std::istringstream garbage("dimension 2\nvertices 2\n0 0 0\n");
  CHECK_THROWS_AS(read_polytope(garbage), InvalidArgument);
  CHECK(volume_json(p).find("\"volume\"") != std::string::npos);
}
