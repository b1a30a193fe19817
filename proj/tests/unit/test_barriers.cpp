#include <doctest.h>

#include "mongeampere/barriers/barrier.hpp"

#include <cmath>
#include <random>

using namespace ma;
using namespace ma::barriers;

namespace {

Vec point(std::initializer_list<double> xs) {
  Vec v(xs.size());
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// Plain central-difference Hessian of eval, independent of the library helper.
Mat fd_hessian(const BarrierSpec& w, const Vec& x, double h) {
  const int n = static_cast<int>(x.size());
  Mat H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto f = [&](double si, double sj) {
        Vec y = x;
        y(i) += si * h;
        y(j) += sj * h;
        return w.eval(y);
      };
      H(i, j) = (f(1, 1) - f(1, -1) - f(-1, 1) + f(-1, -1)) / (4 * h * h);
    }
  return H;
}

}  // namespace

TEST_CASE("profiles at x1 = 1 and at 0") {
  CHECK(a_lower(2, 1.0) == doctest::Approx(1.0));
  CHECK(a_upper(2, 1.0) == doctest::Approx(std::sqrt(0.5)));
  CHECK(a_lower(2, 0.0) == 0.0);
  CHECK(a_upper(2, 0.0) == 0.0);
  CHECK(a_lower(3, 0.125) == doctest::Approx(std::pow(0.125, 2.0 / 3.0)));
}

TEST_CASE("w_eps direct substitution") {
  auto w = BarrierSpec::w_eps(2, 0.5);
  CHECK(w.eval(point({0.25, 0.0})) == doctest::Approx(-0.5).epsilon(1e-14));
}

TEST_CASE("boundary vanishing and sign") {
  for (int n = 2; n <= 4; ++n) {
    auto w = BarrierSpec::w_bar(n);
    Vec x = Vec::Zero(n);
    x(0) = 0.0;
    x(1) = 0.3;
    CHECK(w.eval(x) == 0.0);
    x(0) = 0.7;
    x(1) = std::sqrt(2.0);
    CHECK(std::abs(w.eval(x)) < 1e-15);
    x(1) = 0.5;
    CHECK(w.eval(x) < 0.0);
  }
}

TEST_CASE("out of cylinder rejected") {
  auto w = BarrierSpec::w_eps(2, 0.25);
  CHECK_THROWS_AS(w.eval(point({1.5, 0.0})), InvalidArgument);
  CHECK_THROWS_AS(w.eval(point({0.5, 1.5})), InvalidArgument);
  CHECK_THROWS_AS(w.det_hessian(point({0.0, 0.1})), InvalidArgument);
  CHECK_THROWS_AS(BarrierSpec::w_eps(2, 0.6), InvalidArgument);
  CHECK_THROWS_AS(BarrierSpec::w_eps(2, 0.0), InvalidArgument);
}

TEST_CASE("det example n=3 at (1,0,0)") {
  auto w = BarrierSpec::w_eps(3, 0.5);
  CHECK(w.det_hessian(point({1.0, 0.0, 0.0})) == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("w_bar n=2 on the axis") {
  auto w = BarrierSpec::w_bar(2);
  for (double t : {1e-6, 0.01, 0.3, 0.9, 1.0}) {
    double l = std::log(t);
    CHECK(w.det_hessian(point({t, 0.0})) == doctest::Approx((1 - l) / (1 - 2 * l)).epsilon(1e-12));
  }
}

TEST_CASE("closed-form determinant matches determinant of closed-form Hessian") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.05, 1.0), r(-0.8, 0.8);
  for (int n = 2; n <= 5; ++n)
    for (auto w : {BarrierSpec::w_eps(n, 0.3), BarrierSpec::w_bar(n)})
      for (int k = 0; k < 20; ++k) {
        Vec x(n);
        x(0) = u(rng);
        for (int i = 1; i < n; ++i) x(i) = r(rng) / std::sqrt(n - 1.0);
        Mat h = w.hessian(x);
        CHECK(w.det_hessian(x) == doctest::Approx(h.determinant()).epsilon(1e-10));
      }
}

TEST_CASE("Hessian matches finite differences") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.2, 0.95), r(-0.7, 0.7);
  for (int n = 2; n <= 5; ++n)
    for (auto w : {BarrierSpec::w_eps(n, 0.5), BarrierSpec::w_bar(n)})
      for (int k = 0; k < 20; ++k) {
        Vec x(n);
        x(0) = u(rng);
        for (int i = 1; i < n; ++i) x(i) = r(rng) / std::sqrt(n - 1.0);
        Mat exact = w.hessian(x);
        Mat fd = fd_hessian(w, x, 1e-4);
        CHECK((exact - fd).cwiseAbs().maxCoeff() < 1e-6 * (1.0 + exact.cwiseAbs().maxCoeff()));
        Mat lib = finite_difference_hessian(w, x, 1e-4);
        CHECK((lib - fd).cwiseAbs().maxCoeff() < 1e-6 * (1.0 + exact.cwiseAbs().maxCoeff()));
      }
}

TEST_CASE("extrapolated determinant error over the whole cylinder") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 2; n <= 5; ++n)
    for (auto w : {BarrierSpec::w_eps(n, 0.25), BarrierSpec::w_bar(n)})
      for (int k = 0; k < 50; ++k) {
        Vec x(n);
        x(0) = 0.01 + 0.98 * u(rng);
        Vec y(n - 1);
        do {
          for (int i = 0; i < n - 1; ++i) y(i) = (2.0 * u(rng) - 1.0) * std::sqrt(2.0);
        } while (y.norm() >= 0.99 * std::sqrt(2.0));
        x.tail(n - 1) = y;
        CHECK(fd_det_relative_error(w, x) < 1e-6);
      }
  CHECK_THROWS_AS(fd_det_relative_error(BarrierSpec::w_bar(2), Vec::Unit(2, 0) * 0.5, 0.0), InvalidArgument);
}

TEST_CASE("w_eps determinant grid lower bound") {
  for (double eps : {0.1, 0.25, 0.5}) {
    auto c = lemma_constants(2, eps);
    CHECK(c.lambda == doctest::Approx(eps / 4));
    CHECK(c.rho == doctest::Approx(std::sqrt(eps / 2)));
    auto range = det_range(BarrierSpec::w_eps(2, eps), c.rho);
    CHECK(range.min >= eps / 4 - 1e-9);
  }
}

TEST_CASE("lemma constants examples") {
  auto c = lemma_constants(2, 0.1);
  CHECK(c.lambda == doctest::Approx(0.025));
  CHECK(c.rho == doctest::Approx(0.2236067977));
  auto c3 = lemma_constants(3);
  CHECK(c3.lambda >= 0.5 * (2.0 / 9.0) - 1e-12);
  CHECK(c3.lambda <= 2.0 / 9.0);
  // the selected radius is the largest grid value with lambda above half the limit
  double next = c3.rho + 1e-3;
  double lam_next = (2.0 / 3) * ((1 - 2.0 / 3) * (1 - next * next / 2) - (2.0 / 3) * next * next);
  CHECK(lam_next < 0.5 * (2.0 / 9.0));
  CHECK_THROWS_AS(lemma_constants(2, 0.7), InvalidArgument);
}

TEST_CASE("selected constants give a valid lower bound for n >= 3") {
  for (int n = 3; n <= 5; ++n) {
    auto c = lemma_constants(n);
    auto range = det_range(BarrierSpec::w_eps(n, 0.5), c.rho);
    CHECK(range.min >= c.lambda - 1e-9);
  }
}

TEST_CASE("w_bar determinant grid upper bound") {
  CHECK(det_range(BarrierSpec::w_bar(2), std::sqrt(2.0)).max <= 1.0 + 1e-9);
  for (int n = 3; n <= 5; ++n) {
    double bound = (2.0 / n) * (1.0 - 2.0 / n);
    CHECK(upper_det_bound(n) == doctest::Approx(bound));
    CHECK(det_range(BarrierSpec::w_bar(n), std::sqrt(2.0)).max <= bound + 1e-9);
  }
}

TEST_CASE("convexity certificate") {
  auto ok = convexity_cert(BarrierSpec::w_eps(2, 0.5), 0.5);
  CHECK(ok.convex);
  CHECK(ok.min_det > 0);
  auto bad = convexity_cert(BarrierSpec::w_eps(2, 0.1), std::sqrt(2.0));
  CHECK_FALSE(bad.convex);
  // sign of the determinant at the derived witness point
  CHECK(BarrierSpec::w_eps(2, 0.1).det_hessian(point({0.5, 1.4})) < 0);
  auto w3 = convexity_cert(BarrierSpec::w_eps(3, 0.5), 0.1);
  CHECK(w3.convex);
  CHECK(w3.closed_form_error < 1e-10);
}

TEST_CASE("eps optimizer and sharp n=2 bound") {
  CHECK(optimal_eps(std::exp(-2.0)) == doctest::Approx(0.5));
  CHECK(optimal_eps(std::exp(-4.0)) == doctest::Approx(0.25));
  CHECK(optimal_eps(0.5) == doctest::Approx(0.5));
  AmpProfileBound amp(2);
  CHECK(amp.constant() == doctest::Approx(std::sqrt(8.0) * std::exp(1.0)));
  double x = std::exp(-4.0);
  CHECK(amp.constant() * x * 4.0 == doctest::Approx(0.5632).epsilon(1e-3));
}

TEST_CASE("profiles are nondecreasing on [0,1]") {
  double prev_l = 0, prev_u = 0;
  for (int k = 1; k <= 1000; ++k) {
    double t = k / 1000.0;
    CHECK(a_lower(2, t) >= prev_l);
    CHECK(a_upper(2, t) >= prev_u);
    prev_l = a_lower(2, t);
    prev_u = a_upper(2, t);
  }
}

TEST_CASE("reflection keeps the extension below zero and symmetric") {
  auto w = BarrierSpec::w_eps(2, 0.5);
  for (double t : {0.1, 0.4, 0.8}) {
    CHECK(w.eval_extended(point({2 - t, 0.3})) == doctest::Approx(w.eval(point({t, 0.3}))));
    // minimum along the normal line at x1 = 1
    CHECK(w.eval(point({t, 0.3})) >= w.eval(point({1.0, 0.3})));
  }
}
