#include <doctest.h>

#include <array>
#include <cmath>
#include <numbers>

#include "sunlayer/error.hpp"
#include "sunlayer/geometry.hpp"

using namespace sunlayer;
using doctest::Approx;

TEST_CASE("sphere volumes") {
  CHECK(sphere_volume(1) == Approx(2.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(sphere_volume(2) == Approx(4.0 * std::numbers::pi).epsilon(1e-14));
  // 2 pi^{5.5} / Gamma(5.5), 30-digit reference
  CHECK(sphere_volume(10) == Approx(20.7251426732889026548).epsilon(1e-13));
  CHECK(sphere_volume(0) == Approx(2.0));
  CHECK_THROWS_AS(sphere_volume(-1), PreconditionError);
}

TEST_CASE("harmonic dimensions") {
  CHECK(harmonic_dimension(2, 0) == 1);
  CHECK(harmonic_dimension(2, 1) == 3);
  CHECK(harmonic_dimension(2, 2) == 5);
  CHECK(harmonic_dimension(10, 1) == 11);
  CHECK(harmonic_dimension(2, 30) == 61);
  CHECK(harmonic_dimension(1, 7) == 2);
  CHECK(harmonic_dimension(10, 12) == 461890);
  CHECK_THROWS_AS(harmonic_dimension(0, 3), PreconditionError);

  SUBCASE("strictly increasing in k for n >= 2") {
    for (int n = 2; n <= 12; ++n)
      for (int k = 1; k < 60; ++k) CHECK(harmonic_dimension(n, k + 1) > harmonic_dimension(n, k));
  }

  SUBCASE("growth like k^{n-1}") {
    for (int n : {2, 3, 5}) {
      const double r200 = harmonic_dimension_real(n, 200) / std::pow(200.0, n - 1);
      const double r400 = harmonic_dimension_real(n, 400) / std::pow(400.0, n - 1);
      CHECK(std::abs(r200 / r400 - 1.0) < 0.05);
    }
  }

  SUBCASE("overflow reports the bit width") {
    try {
      harmonic_dimension(60, 200);
      FAIL("expected overflow");
    } catch (const OverflowError& e) {
      CHECK(e.required_bits() > 64);
    }
  }
}

TEST_CASE("monomial moments on S^2") {
  const std::array<int, 3> one = {0, 0, 0};
  const std::array<int, 3> odd = {1, 0, 0};
  const std::array<int, 3> sq = {2, 0, 0};
  CHECK(monomial_sphere_moment(2, one) == Approx(4.0 * std::numbers::pi).epsilon(1e-14));
  CHECK(monomial_sphere_moment(2, odd) == 0.0);
  CHECK(monomial_sphere_moment(2, sq) == Approx(4.0 * std::numbers::pi / 3.0).epsilon(1e-14));

  double total = 0.0;
  for (int i = 0; i < 3; ++i) {
    std::array<int, 3> e = {0, 0, 0};
    e[i] = 2;
    total += monomial_sphere_moment(2, e);
  }
  CHECK(std::abs(total - sphere_volume(2)) < 1e-12);

  const std::array<int, 2> wrong = {0, 0};
  CHECK_THROWS_AS(monomial_sphere_moment(2, wrong), PreconditionError);
}
