#ifndef SUNLAYER_ANALYSIS_HPP_
#define SUNLAYER_ANALYSIS_HPP_

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sunlayer/activations.hpp"
#include "sunlayer/gegenbauer.hpp"
#include "sunlayer/quadrature.hpp"

namespace sunlayer {

/// g_theta(t) = sum_k a_k^2 phi_{n,k}(t) for a truncated decomposition.
///
/// <theta o f_x, theta o f_y> = g_theta(x . y), so g_theta(1) is the squared
/// layer norm and the sign of g_theta' decides whether +-x are the only
/// critical points of the noiseless denoising objective.
class GTheta {
 public:
  explicit GTheta(const Decomposition& dec);

  double value(double t) const;
  /// Term-wise derivative through phi'_{n,k} = 2 pi phi_{n+2,k-1}.
  double derivative(double t) const;

  /// sum_k a_k^2 sup|phi''_{n,k}|: a Lipschitz constant of derivative() on [-1,1].
  double derivative_lipschitz() const;

  const std::vector<double>& squared_coeffs() const noexcept { return squared_; }
  int dimension() const noexcept { return basis_.dimension(); }

 private:
  GegenbauerBasis basis_;
  std::vector<double> squared_;
};

double g_theta(const Decomposition& dec, double t);
double g_theta_prime(const Decomposition& dec, double t);

/// c^2 = g_theta(1).
double layer_norm_constant(const Decomposition& dec);

/// The same constant by the other route: vol(S^{n-1}) * ||theta||^2_{L^2(mu_n)}.
double layer_norm_by_quadrature(const Activation& act, int n, int count);

struct GPrimeMinimum {
  /// Signed minimum of g'_theta if it stays positive, otherwise 0.
  double T = 0.0;
  double argmin = 0.0;
  double signed_min = 0.0;
  /// g' changes sign (or touches zero): the denoising guarantee is vacuous.
  bool vacuous = false;
};

/// Minimum of g'_theta over a uniform grid with `grid_size` points, refined by
/// ternary search around the best node down to `refine_tol` in t.
GPrimeMinimum min_gprime(const Decomposition& dec, int grid_size = 4096, double refine_tol = 1e-10);

struct GThetaProfile {
  Decomposition dec;
  std::vector<double> grid;
  std::vector<double> g_values;
  std::vector<double> gprime_values;
  double T_empirical = 0.0;
  double g_at_1 = 0.0;
};

GThetaProfile g_theta_profile(const Decomposition& dec, int grid_size = 4096);

/// Constants of the uniform tail bound on sum_{k>K} |a_k^2 phi'_{n,k}(t)|.
struct TailBound {
  /// int (bi-Laplacian of theta)^2 d mu_n; ||Delta^2 h||^2 = vol(S^{n-1}) * this.
  double delta_theta_n = 0.0;
  /// |a_k^2 phi'_{n,k}(t)| <= A / k^6 for every k >= 1.
  double A_theta_n = 0.0;
  /// A K^{-5} / 5.
  double tail = 0.0;
};

/// Throws SmoothnessError for activations that are not C^4, PreconditionError for K < 1.
TailBound tail_bound_details(const Activation& act, int n, int max_degree);
double tail_bound(const Activation& act, int n, int max_degree);

struct CertifiedBound {
  std::string act;
  int n = 0;
  int max_degree = 0;
  double T_lower = 0.0;
  double grid_min = 0.0;
  double grid_slack = 0.0;
  double tail = 0.0;
  double delta_theta_n = 0.0;
  double A_theta_n = 0.0;
};

/// Lower bound on inf over [-1,1] of the full series g'_theta:
/// grid minimum of the degree-K truncation minus the between-node slack
/// (Lipschitz constant * half spacing) minus the tail bound.
CertifiedBound certified_T_lower(const Activation& act, int n, int max_degree,
                                 int grid_size = 100001);

struct TableRow {
  std::string act;
  int n = 0;
  int max_degree = 0;
  double T_empirical = 0.0;
  std::optional<double> T_certified;
  double g_at_1 = 0.0;
  double ratio = 0.0;
  bool vacuous = false;
};

struct TableOptions {
  int max_degree = 10;
  int node_count = 0;  // 0: default_node_count(max_degree)
  int grid_size = 4096;
  int certified_grid_size = 100001;
};

/// One row per (activation, n), activations outer. Certified column only for C^4 members.
std::vector<TableRow> table_report(std::span<const std::string> acts, std::span<const int> dims,
                                   const TableOptions& options = {});

struct PlotData {
  std::vector<double> t;
  std::vector<double> theta;
  std::vector<double> approx;
  std::vector<double> g;
  std::vector<double> gprime;
};

/// Curves over a uniform grid of [-1,1]: theta, its degree-K Gegenbauer
/// truncation, g_theta and g'_theta.
PlotData plot_data(const Activation& act, int n, int max_degree = 30, int grid_size = 401,
                   int node_count = 0);

/// Least-squares slope of log(a_k^2) against log(k) over k in [k_min, k_max]
/// with the given parity (0 even, 1 odd, -1 all); zero coefficients are skipped.
double coefficient_decay_slope(const Decomposition& dec, int k_min, int k_max, int parity);

}  // namespace sunlayer

#endif  // SUNLAYER_ANALYSIS_HPP_
