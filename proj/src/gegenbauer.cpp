#include "sunlayer/gegenbauer.hpp"

#include <cassert>
#include <cmath>
#include <numbers>
#include <string>

#include "sunlayer/error.hpp"
#include "sunlayer/geometry.hpp"

namespace sunlayer {
namespace {

// Classical family for S^n at t: Chebyshev T_k for n == 1, C_k^{(n-1)/2} otherwise.
void classical_values(int n, int max_degree, double t, std::vector<double>& out) {
  out.assign(static_cast<std::size_t>(max_degree) + 1, 0.0);
  out[0] = 1.0;
  if (max_degree == 0) return;
  if (n == 1) {
    out[1] = t;
    for (int k = 2; k <= max_degree; ++k) out[k] = 2.0 * t * out[k - 1] - out[k - 2];
    return;
  }
  const double lambda = 0.5 * (n - 1);
  out[1] = 2.0 * lambda * t;
  for (int k = 2; k <= max_degree; ++k) {
    out[k] = (2.0 * t * (k + lambda - 1.0) * out[k - 1] - (k + 2.0 * lambda - 2.0) * out[k - 2]) / k;
  }
}

std::vector<double> build_scales(int n, int max_degree) {
  std::vector<double> at_one;
  classical_values(n, max_degree, 1.0, at_one);
  const double vol = sphere_volume(n);
  std::vector<double> scale(at_one.size());
  for (int k = 0; k <= max_degree; ++k) {
    double alpha = 0.0;
    try {
      alpha = harmonic_dimension_real(n, k);
    } catch (const OverflowError&) {
      alpha = INFINITY;
    }
    const double s = alpha / vol / at_one[k];
    if (!std::isfinite(s) || !std::isfinite(at_one[k]) || s == 0.0) {
      throw NumericalError("GegenbauerBasis: normalization overflows at degree " + std::to_string(k) +
                           " for n=" + std::to_string(n) + "; largest safe K is " +
                           std::to_string(k - 1));
    }
    scale[k] = s;
  }
  return scale;
}

}  // namespace

double derivative_constant(int n) {
  return (n + 1) * sphere_volume(n + 2) / sphere_volume(n);
}

GegenbauerBasis::GegenbauerBasis(int n, int max_degree)
    : n_(n), max_degree_(max_degree), lambda_(0.5 * (n - 1)) {
  if (n < 1) throw PreconditionError("GegenbauerBasis: n must be >= 1, got " + std::to_string(n));
  if (max_degree < 0) throw PreconditionError("GegenbauerBasis: K must be >= 0");
  scale_ = build_scales(n, max_degree);
  if (max_degree >= 1) shifted_scale_ = build_scales(n + 2, max_degree - 1);
}

void GegenbauerBasis::classical_all(double t, std::vector<double>& out) const {
  assert(std::abs(t) <= 1.0 + 1e-12 && "extrapolating outside [-1, 1]");
  classical_values(n_, max_degree_, t, out);
}

double GegenbauerBasis::evaluate(int k, double t) const {
  if (k < 0 || k > max_degree_)
    throw PreconditionError("GegenbauerBasis::evaluate: degree " + std::to_string(k) +
                            " outside [0, " + std::to_string(max_degree_) + "]");
  std::vector<double> values;
  classical_values(n_, k, t, values);
  return scale_[k] * values[k];
}

std::vector<double> GegenbauerBasis::evaluate_all(double t) const {
  std::vector<double> values;
  classical_all(t, values);
  for (int k = 0; k <= max_degree_; ++k) values[k] *= scale_[k];
  return values;
}

std::vector<double> GegenbauerBasis::evaluate_derivative_all(double t) const {
  std::vector<double> out(static_cast<std::size_t>(max_degree_) + 1, 0.0);
  if (max_degree_ == 0) return out;
  std::vector<double> shifted;
  classical_values(n_ + 2, max_degree_ - 1, t, shifted);
  const double c = derivative_constant(n_);
  for (int k = 1; k <= max_degree_; ++k) out[k] = c * shifted_scale_[k - 1] * shifted[k - 1];
  return out;
}

double GegenbauerBasis::evaluate_derivative(int k, double t) const {
  if (k < 0 || k > max_degree_)
    throw PreconditionError("GegenbauerBasis::evaluate_derivative: degree " + std::to_string(k) +
                            " outside [0, " + std::to_string(max_degree_) + "]");
  if (k == 0) return 0.0;
  std::vector<double> shifted;
  classical_values(n_ + 2, k - 1, t, shifted);
  return derivative_constant(n_) * shifted_scale_[k - 1] * shifted[k - 1];
}

double GegenbauerBasis::norm_squared(int k) const {
  if (k < 0 || k > max_degree_) throw PreconditionError("GegenbauerBasis::norm_squared: degree out of range");
  return harmonic_dimension_real(n_, k) / (sphere_volume(n_) * sphere_volume(n_ - 1));
}

double sup_norm(int n, int k) {
  return harmonic_dimension_real(n, k) / sphere_volume(n);
}

double derivative_sup(int n, int k) {
  if (k < 1) return 0.0;
  return derivative_constant(n) * sup_norm(n + 2, k - 1);
}

double second_derivative_sup(int n, int k) {
  if (k < 2) return 0.0;
  return derivative_constant(n) * derivative_constant(n + 2) * sup_norm(n + 4, k - 2);
}

}  // namespace sunlayer
