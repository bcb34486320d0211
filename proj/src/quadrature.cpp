#include "sunlayer/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "sunlayer/error.hpp"
#include "sunlayer/gegenbauer.hpp"

namespace sunlayer {
namespace {

// Integral of (1-s)^alpha (1+s)^beta over [-1, 1].
double jacobi_moment(double alpha, double beta) {
  return std::exp((alpha + beta + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                  std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0));
}

}  // namespace

QuadratureRule jacobi_rule(double alpha, double beta, int count) {
  if (count < 1) throw PreconditionError("jacobi_rule: need at least one node");
  if (alpha <= -1.0 || beta <= -1.0) throw PreconditionError("jacobi_rule: exponents must exceed -1");

  // Symmetric tridiagonal Jacobi matrix of the monic recurrence.
  const double ab = alpha + beta;
  Eigen::VectorXd diag(count);
  Eigen::VectorXd sub(std::max(count - 1, 0));
  for (int k = 0; k < count; ++k) {
    const double s = 2.0 * k + ab;
    diag(k) = (k == 0) ? (beta - alpha) / (ab + 2.0)
                       : (beta * beta - alpha * alpha) / (s * (s + 2.0));
  }
  for (int k = 1; k < count; ++k) {
    const double s = 2.0 * k + ab;
    double b2;
    if (k == 1) {
      b2 = 4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    } else {
      b2 = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) / (s * s * (s + 1.0) * (s - 1.0));
    }
    sub(k - 1) = std::sqrt(b2);
  }
  // Alpha = beta forces zero diagonal; avoid 0/0 when alpha + beta = -1.
  if (alpha == beta) diag.setZero();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "jacobi_rule: eigen-solver did not converge (Q=" << count << ", alpha=" << alpha
        << ", beta=" << beta << ")";
    throw NumericalError(msg.str());
  }

  const double mu0 = jacobi_moment(alpha, beta);
  QuadratureRule rule;
  rule.nodes.resize(count);
  rule.weights.resize(count);
  for (int i = 0; i < count; ++i) {
    const double v = solver.eigenvectors()(0, i);
    rule.nodes[i] = solver.eigenvalues()(i);
    rule.weights[i] = mu0 * v * v;
  }
  return rule;
}

QuadratureRule gauss_jacobi(int n, int count) {
  if (n < 1) throw PreconditionError("gauss_jacobi: n must be >= 1, got " + std::to_string(n));
  const double a = 0.5 * (n - 2);
  QuadratureRule rule = jacobi_rule(a, a, count);
  rule.n = n;
  if (count % 2 == 1) rule.nodes[count / 2] = 0.0;
  // Enforce exact node symmetry.
  for (int i = 0; i < count / 2; ++i) {
    const double x = 0.5 * (rule.nodes[count - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[count - 1 - i] + rule.weights[i]);
    rule.nodes[i] = -x;
    rule.nodes[count - 1 - i] = x;
    rule.weights[i] = rule.weights[count - 1 - i] = w;
  }
  return rule;
}

QuadratureRule split_rule(int n, int count) {
  if (n < 1) throw PreconditionError("split_rule: n must be >= 1");
  if (count < 2) throw PreconditionError("split_rule: need at least two nodes");
  const int half = (count + 1) / 2;
  const double a = 0.5 * (n - 2);
  // On [0,1]: t = (1+s)/2, (1-t^2)^a dt = 2^{-a-1} (1-s)^a ((3+s)/2)^a ds.
  const QuadratureRule base = jacobi_rule(a, 0.0, half);
  QuadratureRule rule;
  rule.n = n;
  rule.nodes.resize(2 * half);
  rule.weights.resize(2 * half);
  const double pre = std::pow(2.0, -a - 1.0);
  for (int i = 0; i < half; ++i) {
    const double s = base.nodes[i];
    const double t = 0.5 * (1.0 + s);
    const double w = pre * base.weights[i] * std::pow(0.5 * (3.0 + s), a);
    rule.nodes[half - 1 - i] = -t;
    rule.weights[half - 1 - i] = w;
    rule.nodes[half + i] = t;
    rule.weights[half + i] = w;
  }
  return rule;
}

double integrate(const QuadratureRule& rule, const std::function<double(double)>& f) {
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double v = f(rule.nodes[i]);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "integrate: non-finite integrand " << v << " at node t=" << rule.nodes[i];
      throw NumericalError(msg.str());
    }
    sum += rule.weights[i] * v;
  }
  return sum;
}

namespace {

std::vector<double> project(const Activation& act, const GegenbauerBasis& basis,
                            const QuadratureRule& rule, double* residual) {
  const int K = basis.max_degree();
  std::vector<double> acc(static_cast<std::size_t>(K) + 1, 0.0);
  std::vector<double> values(rule.size());
  std::vector<std::vector<double>> phis(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double t = rule.nodes[i];
    const double v = act(t);
    if (!std::isfinite(v)) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "decompose: activation " << act.name() << " is not finite at t=" << t;
      throw NumericalError(msg.str());
    }
    values[i] = v;
    phis[i] = basis.evaluate_all(t);
    for (int k = 0; k <= K; ++k) acc[k] += rule.weights[i] * v * phis[i][k];
  }
  for (int k = 0; k <= K; ++k) acc[k] /= basis.norm_squared(k);

  if (residual != nullptr) {
    double r2 = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      double approx = 0.0;
      for (int k = 0; k <= K; ++k) approx += acc[k] * phis[i][k];
      const double d = values[i] - approx;
      r2 += rule.weights[i] * d * d;
    }
    *residual = std::sqrt(r2);
  }
  return acc;
}

}  // namespace

int default_node_count(int max_degree) { return 4 * max_degree + 64; }

Decomposition decompose(const Activation& act, int n, int max_degree, int count) {
  if (n < 1) throw PreconditionError("decompose: n must be >= 1");
  if (max_degree < 0) throw PreconditionError("decompose: K must be >= 0");
  if (count < 2 * max_degree + 8)
    throw PreconditionError("decompose: node count " + std::to_string(count) + " below 2K+8 = " +
                            std::to_string(2 * max_degree + 8));

  const GegenbauerBasis basis(n, max_degree);
  Decomposition dec;
  dec.n = n;
  dec.max_degree = max_degree;

  if (act.has_kink()) {
    const int nodes = std::max(count, 4 * max_degree + 64);
    dec.coeffs = project(act, basis, split_rule(n, nodes), &dec.residual);
    return dec;
  }

  dec.coeffs = project(act, basis, gauss_jacobi(n, count), nullptr);
  const auto fine = project(act, basis, gauss_jacobi(n, 2 * count), &dec.residual);
  double change = 0.0;
  for (int k = 0; k <= max_degree; ++k) change = std::max(change, std::abs(fine[k] - dec.coeffs[k]));
  dec.refinement_change = change;
  if (change >= 1e-9) {
    std::ostringstream msg;
    msg << "decompose: " << act.name() << " coefficients moved by " << change
        << " when doubling Q=" << count << "; increase Q";
    throw NumericalError(msg.str());
  }
  return dec;
}

}  // namespace sunlayer
