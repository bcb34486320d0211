#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sunlayer/activations.hpp"
#include "sunlayer/error.hpp"
#include "sunlayer/gegenbauer.hpp"
#include "sunlayer/geometry.hpp"
#include "sunlayer/quadrature.hpp"

using namespace sunlayer;
using doctest::Approx;

TEST_CASE("Gauss-Legendre special case") {
  const auto rule = gauss_jacobi(2, 2);
  REQUIRE(rule.size() == 2);
  CHECK(rule.nodes[0] == Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(rule.nodes[1] == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(rule.weights[0] == Approx(1.0).epsilon(1e-14));
  CHECK(rule.weights[1] == Approx(1.0).epsilon(1e-14));

  CHECK(std::abs(integrate(gauss_jacobi(2, 20), [](double t) { return t * t; }) - 2.0 / 3.0) < 1e-14);
  CHECK(integrate(gauss_jacobi(2, 5), [](double) { return 1.0; }) == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("weights sum to the measure mass") {
  for (int n : {1, 2, 3, 5, 10}) {
    const auto rule = gauss_jacobi(n, 40);
    double total = 0.0;
    for (double w : rule.weights) total += w;
    CHECK(total == Approx(sphere_volume(n) / sphere_volume(n - 1)).epsilon(1e-10));
  }
  // mu_0 of the n = 10 measure, exact rational
  double total = 0.0;
  for (double w : gauss_jacobi(10, 40).weights) total += w;
  CHECK(total == Approx(0.812698412698412698).epsilon(1e-12));
}

TEST_CASE("nodes symmetric and ordered") {
  for (int n : {1, 3, 10}) {
    const auto rule = gauss_jacobi(n, 31);
    for (std::size_t i = 0; i < rule.size(); ++i) {
      CHECK(rule.nodes[i] == -rule.nodes[rule.size() - 1 - i]);
      if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
      CHECK(rule.weights[i] > 0.0);
    }
  }
}

TEST_CASE("split rule integrates piecewise polynomials exactly") {
  for (int n : {1, 2, 3, 10}) {
    const auto full = gauss_jacobi(n, 40);
    const auto split = split_rule(n, 40);
    const double smooth_full = integrate(full, [](double t) { return t * t * t * t + t; });
    const double smooth_split = integrate(split, [](double t) { return t * t * t * t + t; });
    CHECK(smooth_split == Approx(smooth_full).epsilon(1e-12));
    // relu-like integrand: half the even moment
    const double half = integrate(split, [](double t) { return t > 0 ? t * t : 0.0; });
    const double even = integrate(full, [](double t) { return t * t; });
    CHECK(half == Approx(even / 2).epsilon(1e-12));
  }
}

TEST_CASE("orthogonality through the integrator") {
  const GegenbauerBasis b(2, 5);
  const double ip = integrate(gauss_jacobi(2, 30), [&](double t) { return b.evaluate(3, t) * b.evaluate(5, t); });
  CHECK(std::abs(ip) < 1e-12);
}

TEST_CASE("softplus squared norm") {
  const auto& sp = find_activation("softplus");
  const double norm2 = integrate(gauss_jacobi(2, 64), [&](double t) { return sp(t) * sp(t); });
  // quadrature of log(1+e^t)^2 on [-1,1] to 30 digits
  CHECK(norm2 * 2.0 * std::numbers::pi == Approx(7.83036060490740256).epsilon(1e-12));
  CHECK(std::abs(norm2 * 2.0 * std::numbers::pi - 7.83) < 5e-3);
}

TEST_CASE("non-finite integrand reports the node") {
  const auto rule = gauss_jacobi(2, 4);
  CHECK_THROWS_AS(integrate(rule, [](double t) { return t > 0 ? std::nan("") : 0.0; }), NumericalError);
}

TEST_CASE("decompose exact cases") {
  const auto& id = find_activation("id");
  const auto dec = decompose(id, 2, 5, default_node_count(5));
  REQUIRE(dec.coeffs.size() == 6);
  CHECK(dec.coeffs[1] == Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-13));
  for (int k : {0, 2, 3, 4, 5}) CHECK(std::abs(dec.coeffs[k]) < 1e-12);
  CHECK(dec.residual < 1e-12);

  const auto one = constant_activation(1.0);
  const auto cdec = decompose(one, 2, 3, default_node_count(3));
  CHECK(cdec.coeffs[0] == Approx(4.0 * std::numbers::pi).epsilon(1e-13));
  for (int k = 1; k <= 3; ++k) CHECK(std::abs(cdec.coeffs[k]) < 1e-12);
}

TEST_CASE("decompose preconditions") {
  const auto& tanh_act = find_activation("tanh");
  CHECK_THROWS_AS(decompose(tanh_act, 2, 10, 20), PreconditionError);
  CHECK_THROWS_AS(decompose(tanh_act, 0, 10, 64), PreconditionError);
  CHECK_NOTHROW(decompose(tanh_act, 2, 10, 28));
}

TEST_CASE("decompose is stable under node refinement") {
  for (const char* name : {"tanh", "softplus", "relu", "elu"}) {
    const auto& act = find_activation(name);
    for (int n : {2, 10}) {
      const auto a = decompose(act, n, 12, 64);
      const auto b = decompose(act, n, 12, 128);
      for (int k = 0; k <= 12; ++k) CHECK(a.coeffs[k] == Approx(b.coeffs[k]).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("parity of coefficients") {
  // tanh is odd: even coefficients vanish
  const auto dec = decompose(find_activation("tanh"), 3, 12, default_node_count(12));
  for (int k = 0; k <= 12; k += 2) CHECK(std::abs(dec.coeffs[k]) < 1e-12);
  CHECK(std::abs(dec.coeffs[1]) > 0.1);
}
