#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "sunlayer/error.hpp"
#include "sunlayer/gegenbauer.hpp"
#include "sunlayer/geometry.hpp"
#include "sunlayer/quadrature.hpp"

using namespace sunlayer;
using doctest::Approx;

TEST_CASE("normalization anchors") {
  const double pi = std::numbers::pi;
  const GegenbauerBasis b2(2, 2);
  CHECK(b2.evaluate(1, 1.0) == Approx(3.0 / (4.0 * pi)).epsilon(1e-14));
  CHECK(b2.evaluate(0, 0.37) == Approx(1.0 / (4.0 * pi)).epsilon(1e-14));
  CHECK(b2.evaluate(1, 0.5) == Approx(3.0 / (8.0 * pi)).epsilon(1e-14));
  CHECK(b2.evaluate(2, 1.0) == Approx(5.0 / (4.0 * pi)).epsilon(1e-14));
  CHECK_THROWS_AS(b2.evaluate(3, 0.0), PreconditionError);

  for (int n : {1, 2, 3, 10}) {
    const GegenbauerBasis b(n, 40);
    for (int k = 0; k <= 40; ++k)
      CHECK(b.evaluate(k, 1.0) == Approx(harmonic_dimension_real(n, k) / sphere_volume(n)).epsilon(1e-10));
    CHECK(b.evaluate(1, 0.3) == Approx((n + 1) / sphere_volume(n) * 0.3).epsilon(1e-13));
  }
}

TEST_CASE("independent high-precision value") {
  // alpha/vol * C_3^{9/2}(-0.3)/C_3^{9/2}(1) via mpmath's hypergeometric Gegenbauer
  const GegenbauerBasis b(10, 3);
  CHECK(b.evaluate(3, -0.3) == Approx(0.728463018952243287).epsilon(1e-12));
}

TEST_CASE("orthogonality and norms under mu_n") {
  for (int n : {1, 2, 3, 10}) {
    const GegenbauerBasis b(n, 12);
    const auto rule = gauss_jacobi(n, 40);
    for (int j = 0; j <= 12; ++j) {
      for (int k = j; k <= 12; ++k) {
        const double ip = integrate(rule, [&](double t) { return b.evaluate(j, t) * b.evaluate(k, t); });
        if (j == k) {
          CHECK(ip == Approx(b.norm_squared(k)).epsilon(1e-9));
        } else {
          CHECK(std::abs(ip) < 1e-10);
        }
      }
    }
  }
  const GegenbauerBasis b(2, 30);
  const double expected = 61.0 / (4.0 * std::numbers::pi * 2.0 * std::numbers::pi);
  CHECK(b.norm_squared(30) == Approx(expected).epsilon(1e-14));
  const double quad =
      integrate(gauss_jacobi(2, 40), [&](double t) { return b.evaluate(30, t) * b.evaluate(30, t); });
  CHECK(quad == Approx(expected).epsilon(1e-10));
}

TEST_CASE("derivative identity against finite differences") {
  const double pi = std::numbers::pi;
  CHECK(derivative_constant(2) == Approx(2.0 * pi).epsilon(1e-14));
  const GegenbauerBasis b2(2, 5);
  for (double t : {-0.9, 0.0, 0.4}) CHECK(b2.evaluate_derivative(1, t) == Approx(3.0 / (4.0 * pi)));
  CHECK(GegenbauerBasis(1, 3).evaluate_derivative(0, 0.7) == 0.0);

  const double h = 1e-5;
  const double fd = (b2.evaluate(5, 0.2 + h) - b2.evaluate(5, 0.2 - h)) / (2 * h);
  CHECK(std::abs(b2.evaluate_derivative(5, 0.2) - fd) < 1e-6);

  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> pick_k(0, 12);
  std::uniform_real_distribution<double> pick_t(-0.99, 0.99);
  for (int n : {1, 2, 3, 10}) {
    const GegenbauerBasis b(n, 12);
    // five-point stencil; tolerance relative to the derivative's sup norm, which reaches ~1e5 at n=10
    const double s = 1e-3;
    for (int trial = 0; trial < 100; ++trial) {
      const int k = pick_k(rng);
      const double t = pick_t(rng);
      const double diff = (-b.evaluate(k, t + 2 * s) + 8 * b.evaluate(k, t + s) - 8 * b.evaluate(k, t - s) +
                           b.evaluate(k, t - 2 * s)) / (12 * s);
      CHECK(std::abs(b.evaluate_derivative(k, t) - diff) < 1e-6 * std::max(1.0, derivative_sup(n, k)));
    }
  }
}

TEST_CASE("sup norms") {
  const double pi = std::numbers::pi;
  CHECK(sup_norm(2, 0) == Approx(1.0 / (4.0 * pi)));
  CHECK(derivative_sup(2, 1) == Approx(3.0 / (4.0 * pi)));
  // closed form vs mpmath derivative at t = 1
  CHECK(derivative_sup(2, 4) == Approx(7.16197243913529011).epsilon(1e-13));

  SUBCASE("grid maximization of |phi'| matches M_k") {
    const GegenbauerBasis b(2, 4);
    double best = 0.0;
    const int pts = 100000;
    for (int i = 0; i < pts; ++i) best = std::max(best, std::abs(b.evaluate_derivative(4, -1.0 + 2.0 * i / (pts - 1))));
    CHECK(best == Approx(derivative_sup(2, 4)).epsilon(1e-8));
  }

  SUBCASE("sup attained at 1") {
    for (int n : {1, 2, 3, 10}) {
      const GegenbauerBasis b(n, 15);
      for (int k = 0; k <= 15; ++k) {
        double best = 0.0;
        for (int i = 0; i < 10000; ++i) best = std::max(best, std::abs(b.evaluate(k, -1.0 + 2.0 * i / 9999)));
        CHECK(best <= b.evaluate(k, 1.0) * (1 + 1e-9));
      }
    }
  }

  SUBCASE("second derivative bound") {
    const GegenbauerBasis b(3, 6);
    const double h = 1e-4;
    const double d2 = (b.evaluate_derivative(6, 1.0) - b.evaluate_derivative(6, 1.0 - h)) / h;
    CHECK(d2 == Approx(second_derivative_sup(3, 6)).epsilon(1e-3));
  }
}

TEST_CASE("relative accuracy at high degree") {
  // Chebyshev closed form for n = 1: phi_{1,k}(cos a) = cos(k a) / pi
  const GegenbauerBasis b(1, 100);
  for (double a : {0.1, 1.0, 2.5}) {
    CHECK(b.evaluate(100, std::cos(a)) == Approx(std::cos(100 * a) / std::numbers::pi).epsilon(1e-10));
  }
}
