#ifndef SUNLAYER_GEGENBAUER_HPP_
#define SUNLAYER_GEGENBAUER_HPP_

#include <vector>

namespace sunlayer {

// Zonal polynomials phi_{n,k} of S^n, normalized so that
//
//   phi_{n,k}(1) = alpha_{n,k} / vol(S^n)
//   int phi_{n,k}^2 (1-t^2)^{(n-2)/2} dt = alpha_{n,k} / (vol(S^n) vol(S^{n-1}))
//
// i.e. phi_{n,k}(s . t) is the reproducing kernel of the degree-k harmonics on
// S^n with the unnormalized surface measure. Internally the classical
// Gegenbauer family C_k^lambda, lambda = (n-1)/2, is evaluated by its
// three-term recurrence and rescaled; for n = 1 Chebyshev T_k is used.
//
// Derivatives satisfy phi'_{n,k} = 2 pi phi_{n+2,k-1}.

/// Multiplier between the zonal derivative and the (n+2)-dimensional family:
/// phi'_{n,k}(t) = derivative_constant(n) * phi_{n+2,k-1}(t).
double derivative_constant(int n);

class GegenbauerBasis {
 public:
  /// Throws PreconditionError for n < 1 or K < 0, NumericalError (naming the
  /// largest safe K) when a normalization constant overflows.
  GegenbauerBasis(int n, int max_degree);

  int dimension() const noexcept { return n_; }
  int max_degree() const noexcept { return max_degree_; }

  /// phi_{n,k}(t). Throws PreconditionError when k > max_degree().
  double evaluate(int k, double t) const;

  /// phi'_{n,k}(t), evaluated through the (n+2)-dimensional family.
  double evaluate_derivative(int k, double t) const;

  /// All of phi_{n,0..K}(t) in one recurrence sweep.
  std::vector<double> evaluate_all(double t) const;
  /// All of phi'_{n,0..K}(t).
  std::vector<double> evaluate_derivative_all(double t) const;

  /// Closed-form squared norm in L^2(mu_n).
  double norm_squared(int k) const;

  /// Scale mapping the classical family value at degree k to phi_{n,k}.
  double scale(int k) const { return scale_.at(k); }

 private:
  void classical_all(double t, std::vector<double>& out) const;

  int n_;
  int max_degree_;
  double lambda_;
  std::vector<double> scale_;
  // Scales for the (n+2)-dimensional family up to degree K-1.
  std::vector<double> shifted_scale_;
};

/// sup over [-1,1] of |phi_{n,k}| = phi_{n,k}(1) = alpha_{n,k}/vol(S^n).
double sup_norm(int n, int k);

/// M_k = sup over [-1,1] of |phi'_{n,k}|.
double derivative_sup(int n, int k);

/// sup over [-1,1] of |phi''_{n,k}|; zero for k < 2.
double second_derivative_sup(int n, int k);

}  // namespace sunlayer

#endif  // SUNLAYER_GEGENBAUER_HPP_
