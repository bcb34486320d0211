#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "sunlayer/activations.hpp"
#include "sunlayer/error.hpp"

using namespace sunlayer;
using doctest::Approx;

TEST_CASE("catalog values") {
  CHECK(find_activation("sigmoid").evaluate(0, 0.0) == Approx(0.5));
  CHECK(find_activation("tanh").evaluate(1, 0.0) == Approx(1.0));
  CHECK(find_activation("relu")(-0.3) == 0.0);
  CHECK(find_activation("relu")(0.3) == 0.3);
  CHECK(find_activation("elu")(-1.0) == Approx(std::exp(-1.0) - 1.0));
  CHECK(find_activation("gelu_paper")(0.5) == Approx(0.5 * std::exp(-0.25)));
  CHECK(find_activation("swish")(1.0) == Approx(1.0 / (1.0 + std::exp(-1.0))));
  CHECK_THROWS_AS(find_activation("cube24"), PreconditionError);

  for (auto id : table_activation_ids()) {
    CHECK(std::find(activation_ids().begin(), activation_ids().end(), id) != activation_ids().end());
    CHECK(find_activation(id).is_smooth());
  }
  CHECK_FALSE(find_activation("relu").is_smooth());
  CHECK_FALSE(find_activation("elu").is_smooth());
  CHECK(find_activation("relu").has_kink());
}

TEST_CASE("softplus second derivative") {
  const auto& sp = find_activation("softplus");
  // sigma(t)(1 - sigma(t)) at 0.3
  CHECK(sp.evaluate(2, 0.3) == Approx(0.24445831169074586907).epsilon(1e-14));
  const double h = 1e-5;
  const double fd = (sp.evaluate(1, 0.3 + h) - sp.evaluate(1, 0.3 - h)) / (2 * h);
  CHECK(std::abs(sp.evaluate(2, 0.3) - fd) < 1e-6);
}

TEST_CASE("analytic derivatives agree with finite differences") {
  const double h = 1e-5;
  for (auto id : table_activation_ids()) {
    const auto& act = find_activation(id);
    for (double t : {-0.8, -0.2, 0.1, 0.7}) {
      for (int order = 1; order <= kMaxDerivativeOrder; ++order) {
        const double fd = (act.evaluate(order - 1, t + h) - act.evaluate(order - 1, t - h)) / (2 * h);
        INFO(std::string(id) << " order " << order << " t " << t);
        CHECK(std::abs(act.evaluate(order, t) - fd) < 1e-6 * (1 + std::abs(fd)));
      }
    }
  }
}

TEST_CASE("kinked activations expose only their smooth orders") {
  const auto& relu = find_activation("relu");
  CHECK(relu.evaluate(1, 0.5) == 1.0);
  CHECK(relu.evaluate(1, -0.5) == 0.0);
  CHECK(relu.evaluate(1, 0.0) == 1.0);
  CHECK(relu.evaluate(2, 0.5) == 0.0);
  CHECK_THROWS_AS(relu.evaluate(2, 0.0), SmoothnessError);
  const auto& elu = find_activation("elu");
  CHECK(elu.evaluate(2, -0.5) == Approx(std::exp(-0.5)));
  CHECK(elu.evaluate(2, 0.0) == 0.0);
  CHECK_THROWS_AS(elu.evaluate(3, 0.0), SmoothnessError);
  CHECK_THROWS_AS(find_activation("tanh").evaluate(5, 0.0), PreconditionError);
}

TEST_CASE("spherical Laplacian") {
  CHECK(spherical_laplacian(find_activation("id"), 2, 0.5) == Approx(-1.0));
  for (auto id : table_activation_ids()) {
    const auto& act = find_activation(id);
    CHECK(spherical_laplacian(act, 5, 0.0) == Approx(act.evaluate(2, 0.0)));
  }
  // (1-t^2) tanh'' - n t tanh' at n=10, t=0.4, symbolic reference
  CHECK(spherical_laplacian(find_activation("tanh"), 10, 0.4) ==
        Approx(-3.9687215799706420064).epsilon(1e-13));
}

TEST_CASE("bi-Laplacian") {
  for (int n : {1, 2, 5, 10}) {
    for (double t : {-0.5, 0.3}) CHECK(bi_laplacian(find_activation("id"), n, t) == Approx(n * n * t));
    CHECK(bi_laplacian(constant_activation(2.5), n, 0.2) == 0.0);
  }
  const auto& sig = find_activation("sigmoid");
  // symbolic reference
  CHECK(bi_laplacian(sig, 2, 0.1) == Approx(0.29509983703714012495).epsilon(1e-12));

  SUBCASE("nested finite differences") {
    const double h = 1e-3;
    auto lap = [&](double t) { return spherical_laplacian(sig, 2, t); };
    const double t = 0.1;
    const double d1 = (lap(t + h) - lap(t - h)) / (2 * h);
    const double d2 = (lap(t + h) - 2 * lap(t) + lap(t - h)) / (h * h);
    const double nested = (1 - t * t) * d2 - 2 * t * d1;
    CHECK(std::abs(nested - bi_laplacian(sig, 2, t)) < 1e-4);
  }

  CHECK_THROWS_AS(bi_laplacian(find_activation("relu"), 2, 0.1), SmoothnessError);
  CHECK_THROWS_AS(bi_laplacian(find_activation("elu"), 2, 0.1), SmoothnessError);
}

TEST_CASE("polynomial activation") {
  const auto p = polynomial_activation({1.0, 0.0, 3.0});
  CHECK(p(2.0) == Approx(13.0));
  CHECK(p.evaluate(1, 2.0) == Approx(12.0));
  CHECK(p.evaluate(2, 2.0) == Approx(6.0));
  CHECK(p.evaluate(3, 2.0) == 0.0);
}
