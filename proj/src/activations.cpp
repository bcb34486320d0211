#include "sunlayer/activations.hpp"

#include <array>
#include <cmath>
#include <string>

#include "sunlayer/error.hpp"

namespace sunlayer {
namespace {

double logistic(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// Derivatives of the logistic function sigma, order 0..4.
double logistic_derivative(int order, double x) {
  const double s = logistic(x);
  const double p = s * (1.0 - s);
  switch (order) {
    case 0: return s;
    case 1: return p;
    case 2: return p * (1.0 - 2.0 * s);
    case 3: return p * (1.0 - 6.0 * s + 6.0 * s * s);
    default: return p * (1.0 - 2.0 * s) * (1.0 - 12.0 * s + 12.0 * s * s);
  }
}

double identity_eval(int order, double x) {
  if (order == 0) return x;
  return order == 1 ? 1.0 : 0.0;
}

double softplus_eval(int order, double x) {
  if (order == 0) return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
  return logistic_derivative(order - 1, x);
}

double tanh_eval(int order, double x) {
  const double u = std::tanh(x);
  const double q = 1.0 - u * u;
  switch (order) {
    case 0: return u;
    case 1: return q;
    case 2: return -2.0 * u * q;
    case 3: return q * (6.0 * u * u - 2.0);
    default: return u * q * (16.0 - 24.0 * u * u);
  }
}

double sigmoid_eval(int order, double x) { return logistic_derivative(order, x); }

// (x sigma)^{(m)} = x sigma^{(m)} + m sigma^{(m-1)}
double swish_eval(int order, double x) {
  const double head = x * logistic_derivative(order, x);
  return order == 0 ? head : head + order * logistic_derivative(order - 1, x);
}

// x exp(-x^2)
double gelu_paper_eval(int order, double x) {
  const double e = std::exp(-x * x);
  const double x2 = x * x;
  switch (order) {
    case 0: return x * e;
    case 1: return e * (1.0 - 2.0 * x2);
    case 2: return e * x * (4.0 * x2 - 6.0);
    case 3: return e * (-8.0 * x2 * x2 + 24.0 * x2 - 6.0);
    default: return e * x * (16.0 * x2 * x2 - 80.0 * x2 + 60.0);
  }
}

// Kinked members use x >= 0 for the right branch so that t == 0 yields the
// right derivative.
double relu_eval(int order, double x) {
  const bool right = x >= 0.0;
  if (order == 0) return right ? x : 0.0;
  if (order == 1) return right ? 1.0 : 0.0;
  return 0.0;
}

double leaky_relu_eval(int order, double x) {
  constexpr double kSlope = 0.01;
  const bool right = x >= 0.0;
  if (order == 0) return right ? x : kSlope * x;
  if (order == 1) return right ? 1.0 : kSlope;
  return 0.0;
}

double elu_eval(int order, double x) {
  if (x >= 0.0) {
    if (order == 0) return x;
    return order == 1 ? 1.0 : 0.0;
  }
  return order == 0 ? std::expm1(x) : std::exp(x);
}

constexpr std::array<std::string_view, 9> kIds = {
    "id", "relu", "elu", "leaky_relu", "softplus", "tanh", "sigmoid", "swish", "gelu_paper"};

constexpr std::array<std::string_view, 6> kTableIds = {"id",      "softplus", "tanh",
                                                       "sigmoid", "swish",    "gelu_paper"};

const std::vector<Activation>& catalog() {
  static const std::vector<Activation> acts = {
      Activation("id", kMaxDerivativeOrder, false, identity_eval),
      Activation("relu", 0, true, relu_eval),
      Activation("elu", 1, true, elu_eval),
      Activation("leaky_relu", 0, true, leaky_relu_eval),
      Activation("softplus", kMaxDerivativeOrder, false, softplus_eval),
      Activation("tanh", kMaxDerivativeOrder, false, tanh_eval),
      Activation("sigmoid", kMaxDerivativeOrder, false, sigmoid_eval),
      Activation("swish", kMaxDerivativeOrder, false, swish_eval),
      Activation("gelu_paper", kMaxDerivativeOrder, false, gelu_paper_eval),
  };
  return acts;
}

}  // namespace

Activation::Activation(std::string name, int smoothness_order, bool kink_at_zero, Evaluator eval)
    : name_(std::move(name)),
      smoothness_order_(smoothness_order),
      kink_at_zero_(kink_at_zero),
      eval_(std::move(eval)) {}

double Activation::evaluate(int order, double t) const {
  if (order < 0 || order > kMaxDerivativeOrder)
    throw PreconditionError("activation " + name_ + ": derivative order " + std::to_string(order) +
                            " outside 0..4");
  if (kink_at_zero_ && t == 0.0 && order > smoothness_order_ + 1)
    throw SmoothnessError("activation " + name_ + ": order " + std::to_string(order) +
                          " derivative undefined at the kink t=0");
  return eval_(order, t);
}

const Activation& find_activation(std::string_view id) {
  for (const auto& act : catalog())
    if (act.name() == id) return act;
  throw PreconditionError("unknown activation '" + std::string(id) + "'");
}

std::span<const std::string_view> activation_ids() { return kIds; }

std::span<const std::string_view> table_activation_ids() { return kTableIds; }

Activation constant_activation(double value) {
  return Activation("constant", kMaxDerivativeOrder, false,
                    [value](int order, double) { return order == 0 ? value : 0.0; });
}

Activation polynomial_activation(std::vector<double> coeffs) {
  return Activation("polynomial", kMaxDerivativeOrder, false,
                    [c = std::move(coeffs)](int order, double t) {
                      // Horner on the order-th derivative's coefficients.
                      double acc = 0.0;
                      for (int j = static_cast<int>(c.size()) - 1; j >= order; --j) {
                        double falling = 1.0;
                        for (int i = 0; i < order; ++i) falling *= j - i;
                        acc = acc * t + falling * c[j];
                      }
                      return acc;
                    });
}

double spherical_laplacian(const Activation& act, int n, double t) {
  if (act.smoothness_order() < 2 && act.has_kink() && t == 0.0)
    throw SmoothnessError("spherical_laplacian: " + act.name() + " is not twice differentiable at 0");
  return act.evaluate(2, t) * (1.0 - t * t) - n * t * act.evaluate(1, t);
}

double bi_laplacian(const Activation& act, int n, double t) {
  if (!act.is_smooth())
    throw SmoothnessError("bi_laplacian: " + act.name() + " is not C^4");
  const double d1 = act.evaluate(1, t);
  const double d2 = act.evaluate(2, t);
  const double d3 = act.evaluate(3, t);
  const double d4 = act.evaluate(4, t);
  const double s = 1.0 - t * t;
  // u = L theta; u' and u'' expanded in terms of theta's derivatives.
  const double du = s * d3 - (n + 2) * t * d2 - n * d1;
  const double d2u = s * d4 - (n + 4) * t * d3 - (2.0 * n + 2.0) * d2;
  return s * d2u - n * t * du;
}

}  // namespace sunlayer
