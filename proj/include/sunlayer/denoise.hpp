#ifndef SUNLAYER_DENOISE_HPP_
#define SUNLAYER_DENOISE_HPP_

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "sunlayer/activations.hpp"
#include "sunlayer/analysis.hpp"
#include "sunlayer/frames.hpp"
#include "sunlayer/quadrature.hpp"

namespace sunlayer {

/// Independent random stream for (master seed, i, j); identical across runs
/// and independent of evaluation order.
std::mt19937_64 derive_stream(std::uint64_t master, std::uint64_t i, std::uint64_t j = 0);

/// Uniform point on S^{dim-1}.
Eigen::VectorXd random_unit_vector(int dim, std::mt19937_64& rng);

/// x -> g_theta(x . x#) + sum_k a_k sum_i e_{k,i} phi_{n,k}(x . sigma_{k,i}) on S^n.
///
/// Maximizing this is equivalent to minimizing ||theta o f_x - y||^2 with
/// y = theta o f_{x#} + eta, because ||theta o f_x|| does not depend on x.
class ZonalObjective {
 public:
  ZonalObjective(Decomposition dec, Eigen::VectorXd x_sharp, NoiseSpec noise = {});

  double value(const Eigen::VectorXd& x) const;
  /// Ambient gradient g'(x.x#) x# + B(x).
  Eigen::VectorXd ambient_gradient(const Eigen::VectorXd& x) const;
  /// (I - x x^T) ambient_gradient(x).
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  /// B(x) = sum_k a_k sum_i e_{k,i} phi'_{n,k}(x . sigma_{k,i}) sigma_{k,i}
  Eigen::VectorXd noise_gradient(const Eigen::VectorXd& x) const;

  const Decomposition& decomposition() const noexcept { return dec_; }
  const Eigen::VectorXd& x_sharp() const noexcept { return x_sharp_; }
  const NoiseSpec& noise() const noexcept { return noise_; }
  int dimension() const noexcept { return dec_.n; }

  /// Copy with x# and every noise point mapped by the orthogonal matrix q.
  ZonalObjective rotated(const Eigen::MatrixXd& q) const;

 private:
  Decomposition dec_;
  Eigen::VectorXd x_sharp_;
  NoiseSpec noise_;
  GTheta g_;
  GegenbauerBasis basis_;
};

double objective_value(const ZonalObjective& obj, const Eigen::VectorXd& x);
Eigen::VectorXd objective_gradient(const ZonalObjective& obj, const Eigen::VectorXd& x);

struct AscentOptions {
  int restarts = 8;
  std::uint64_t seed = 0;
  double stop_tol = 1e-9;
  int max_iterations = 10000;
  double initial_step = 1.0;
  double armijo_slope = 1e-4;
  double shrink = 0.5;
  /// false: descend instead (finds local minima of the objective).
  bool ascent = true;
  double merge_angle = 1e-6;
};

struct CriticalPoint {
  Eigen::VectorXd x;
  double value = 0.0;
  double gradient_norm = 0.0;
  double correlation = 0.0;
  int hits = 1;
};

struct CriticalPointSearch {
  std::vector<CriticalPoint> points;
  /// Every converged run's end point, one per restart, before merging.
  std::vector<CriticalPoint> runs;
  int non_converged = 0;
};

/// Projected gradient ascent (or descent) with Armijo backtracking and
/// renormalization, from uniformly random starts.
CriticalPointSearch find_critical_points(const ZonalObjective& obj, const AscentOptions& options);

/// sum_k M_k |a_k| sum_i |e_{k,i}|: uniform in x, dominates ||B(x)||.
double epsilon_bound(const Decomposition& dec, const NoiseSpec& noise);
/// sum_k M_k |a_k| ||eta_k||, the component-norm form (reported, not used as a bound).
double epsilon_norm_form(const Decomposition& dec, const NoiseSpec& noise);
/// ||B(x)||
double epsilon_exact(const ZonalObjective& obj, const Eigen::VectorXd& x);

struct TheoremTrial {
  Eigen::VectorXd x_hat;
  double correlation = 0.0;
  double value = 0.0;
  bool from_ascent = true;
};

struct TheoremReport {
  std::vector<TheoremTrial> trials;
  double T = 0.0;
  double eps_bound = 0.0;
  double eps_norm_form = 0.0;
  double eps_exact_sup = 0.0;
  double guaranteed_correlation = 0.0;
  double min_found_correlation = 1.0;
  /// eps_bound < T; otherwise the bound is vacuous and nothing is asserted.
  bool applicable = false;
  int violations = 0;
  int non_converged = 0;
  bool passed = false;
};

struct TheoremOptions {
  int restarts = 8;
  std::uint64_t seed = 0;
  int eps_samples = 100;
  /// Also search local minima (critical points near -x#).
  bool include_descent = true;
  /// Slack on the correlation check for numerically converged critical points.
  double tolerance = 1e-8;
};

/// Every critical point found must satisfy |x . x#| >= 1 - 2 eps/(T + eps)
/// with eps = epsilon_bound.
TheoremReport verify_theorem(const ZonalObjective& obj, double T, const TheoremOptions& options);

struct TheoremInstance {
  std::string act;
  int n = 0;
  ZonalObjective objective;
  double T = 0.0;
  double target_ratio = 0.0;
};

struct TheoremSuiteOptions {
  std::vector<std::string> acts = {"id", "softplus", "tanh", "sigmoid", "swish", "gelu_paper"};
  std::vector<int> dims = {1, 2, 3, 5, 10};
  int max_degree = 10;
  /// eps_bound / T drawn uniformly from this range.
  double min_ratio = 0.05;
  double max_ratio = 0.95;
};

/// Random applicable instance: activation and dimension drawn from the
/// options, noise on circle designs (n=1), the icosahedron plus single kernels
/// (n=2) or single kernels (n>=3), rescaled so eps_bound/T hits a random target.
TheoremInstance random_theorem_instance(const TheoremSuiteOptions& options, std::uint64_t seed,
                                        int index);

/// x -> theta(B x) with unit-norm rows of B.
class FiniteLayer {
 public:
  FiniteLayer(Eigen::MatrixXd rows, const Activation& act);

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// Riemannian gradient of ||apply(x) - y||^2.
  Eigen::VectorXd residual_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

  const Eigen::MatrixXd& matrix() const noexcept { return rows_; }
  const Activation& activation() const noexcept { return act_; }

 private:
  Eigen::MatrixXd rows_;
  Activation act_;
};

Eigen::VectorXd finite_layer_apply(const FiniteLayer& layer, const Eigen::VectorXd& x);

/// Gaussian matrix with normalized rows.
Eigen::MatrixXd random_row_normalized(int rows, int cols, std::mt19937_64& rng);

struct SyntheticConfig {
  std::vector<std::string> acts = {"relu", "softplus", "elu"};
  int n = 9;
  int rows = 100;
  int trials = 10;
  /// Absolute noise norms ||eta||.
  std::vector<double> noise_levels = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1};
  int restarts = 5;
  int max_iterations = 2000;
  double stop_tol = 1e-8;
  std::uint64_t seed = 0;
};

struct SyntheticRow {
  std::string act;
  double noise_level = 0.0;
  double mean_dist = 0.0;
  double std_dist = 0.0;
  double mean_corr = 0.0;
  double std_corr = 0.0;
  int non_converged = 0;
};

struct ExperimentResult {
  std::vector<SyntheticRow> rows;
};

/// For each activation and noise level: recover x# from y = theta(B x#) + eta
/// by projected gradient descent on ||theta(B x) - y||^2 (best of `restarts`),
/// and summarize ||G(x_hat) - G(x#)|| and <x_hat, x#> over trials.
ExperimentResult synthetic_experiment(const SyntheticConfig& config);

}  // namespace sunlayer

#endif  // SUNLAYER_DENOISE_HPP_
