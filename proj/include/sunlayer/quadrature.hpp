#ifndef SUNLAYER_QUADRATURE_HPP_
#define SUNLAYER_QUADRATURE_HPP_

#include <functional>
#include <vector>

#include "sunlayer/activations.hpp"

namespace sunlayer {

/// Nodes and weights approximating integrals against
/// d mu_n = (1 - t^2)^{(n-2)/2} dt on [-1, 1].
struct QuadratureRule {
  int n = 0;
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Gauss-Jacobi rule with both exponents (n-2)/2 and `count` nodes, via
/// Golub-Welsch. Exact for polynomials of degree <= 2*count - 1.
QuadratureRule gauss_jacobi(int n, int count);

/// Gauss-Jacobi nodes/weights for the general weight (1-s)^alpha (1+s)^beta.
QuadratureRule jacobi_rule(double alpha, double beta, int count);

/// Composite rule for mu_n split at t = 0, `count` nodes in total (rounded
/// up to even). Each half is a Gauss-Jacobi rule carrying the endpoint
/// singularity, so functions with a kink at 0 integrate spectrally.
QuadratureRule split_rule(int n, int count);

/// sum_i w_i f(t_i). Throws NumericalError naming the node if f is not finite there.
double integrate(const QuadratureRule& rule, const std::function<double(double)>& f);

/// Coefficients (a_0..a_K) of theta in the phi_{n,k} basis.
struct Decomposition {
  int n = 0;
  int max_degree = 0;
  std::vector<double> coeffs;
  /// || theta - sum_k a_k phi_{n,k} ||_{L^2(mu_n)}
  double residual = 0.0;
  /// Largest coefficient change when the node count is doubled.
  double refinement_change = 0.0;
};

/// Project `act` onto phi_{n,0..K}, dividing by the closed-form norms.
///
/// Requires count >= 2K + 8. Smooth activations use gauss_jacobi(n, count)
/// and are rechecked with twice as many nodes (change must stay below 1e-9).
/// Kinked activations use split_rule with max(count, 4K + 64) nodes.
Decomposition decompose(const Activation& act, int n, int max_degree, int count);

/// Node count decompose() is called with when the caller has no preference.
int default_node_count(int max_degree);

}  // namespace sunlayer

#endif  // SUNLAYER_QUADRATURE_HPP_
