#include "sunlayer/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sunlayer/error.hpp"
#include "sunlayer/geometry.hpp"

namespace sunlayer {

GTheta::GTheta(const Decomposition& dec) : basis_(dec.n, dec.max_degree) {
  squared_.reserve(dec.coeffs.size());
  for (double a : dec.coeffs) squared_.push_back(a * a);
}

double GTheta::value(double t) const {
  const auto phi = basis_.evaluate_all(t);
  double sum = 0.0;
  for (std::size_t k = 0; k < squared_.size(); ++k) sum += squared_[k] * phi[k];
  return sum;
}

double GTheta::derivative(double t) const {
  const auto dphi = basis_.evaluate_derivative_all(t);
  double sum = 0.0;
  for (std::size_t k = 1; k < squared_.size(); ++k) sum += squared_[k] * dphi[k];
  return sum;
}

double GTheta::derivative_lipschitz() const {
  double sum = 0.0;
  for (std::size_t k = 2; k < squared_.size(); ++k)
    sum += squared_[k] * second_derivative_sup(basis_.dimension(), static_cast<int>(k));
  return sum;
}

double g_theta(const Decomposition& dec, double t) { return GTheta(dec).value(t); }

double g_theta_prime(const Decomposition& dec, double t) { return GTheta(dec).derivative(t); }

double layer_norm_constant(const Decomposition& dec) { return g_theta(dec, 1.0); }

double layer_norm_by_quadrature(const Activation& act, int n, int count) {
  const auto rule = act.has_kink() ? split_rule(n, count) : gauss_jacobi(n, count);
  const double norm2 = integrate(rule, [&](double t) {
    const double v = act(t);
    return v * v;
  });
  return sphere_volume(n - 1) * norm2;
}

namespace {

std::vector<double> uniform_grid(int size) {
  std::vector<double> grid(size);
  for (int i = 0; i < size; ++i) grid[i] = -1.0 + 2.0 * i / (size - 1);
  grid.back() = 1.0;
  return grid;
}

}  // namespace

GPrimeMinimum min_gprime(const Decomposition& dec, int grid_size, double refine_tol) {
  if (grid_size < 1000) throw PreconditionError("min_gprime: grid_size must be >= 1000");
  const GTheta g(dec);
  const auto grid = uniform_grid(grid_size);
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = g.derivative(grid[i]);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }

  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[std::min(best + 1, grid.size() - 1)];
  while (hi - lo > refine_tol) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (g.derivative(m1) < g.derivative(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  double argmin = 0.5 * (lo + hi);
  double refined = g.derivative(argmin);
  if (best_value < refined) {
    refined = best_value;
    argmin = grid[best];
  }

  GPrimeMinimum out;
  out.signed_min = refined;
  out.argmin = argmin;
  out.vacuous = !(refined > 0.0);
  out.T = out.vacuous ? 0.0 : refined;
  return out;
}

GThetaProfile g_theta_profile(const Decomposition& dec, int grid_size) {
  const GTheta g(dec);
  GThetaProfile profile;
  profile.dec = dec;
  profile.grid = uniform_grid(grid_size);
  profile.g_values.reserve(grid_size);
  profile.gprime_values.reserve(grid_size);
  double lowest = std::numeric_limits<double>::infinity();
  for (double t : profile.grid) {
    profile.g_values.push_back(g.value(t));
    profile.gprime_values.push_back(g.derivative(t));
    lowest = std::min(lowest, profile.gprime_values.back());
  }
  profile.T_empirical = lowest;
  profile.g_at_1 = g.value(1.0);
  return profile;
}

TailBound tail_bound_details(const Activation& act, int n, int max_degree) {
  if (!act.is_smooth()) throw SmoothnessError("tail_bound: " + act.name() + " is not C^4");
  if (max_degree < 1) throw PreconditionError("tail_bound: K must be >= 1");
  constexpr int kNodes = 200;
  const auto rule = gauss_jacobi(n, kNodes);
  TailBound out;
  out.delta_theta_n = integrate(rule, [&](double t) {
    const double v = bi_laplacian(act, n, t);
    return v * v;
  });
  // a_k^2 <= Delta vol(S^{n-1}) / (vol(S^n) alpha_{n,k} k^8), |phi'_{n,k}| <= 2pi alpha_{n+2,k-1}/vol(S^{n+2})
  // and alpha_{n+2,k-1}/alpha_{n,k} = (k+n-1)k/(n+2) <= n k^2/(n+2).
  out.A_theta_n = out.delta_theta_n * sphere_volume(n - 1) * derivative_constant(n) * n /
                  ((n + 2.0) * sphere_volume(n) * sphere_volume(n + 2));
  out.tail = out.A_theta_n * std::pow(static_cast<double>(max_degree), -5.0) / 5.0;
  return out;
}

double tail_bound(const Activation& act, int n, int max_degree) {
  return tail_bound_details(act, n, max_degree).tail;
}

CertifiedBound certified_T_lower(const Activation& act, int n, int max_degree, int grid_size) {
  if (grid_size < 2) throw PreconditionError("certified_T_lower: grid_size must be >= 2");
  const TailBound tail = tail_bound_details(act, n, max_degree);
  const Decomposition dec = decompose(act, n, max_degree, default_node_count(max_degree));
  const GTheta g(dec);

  double grid_min = std::numeric_limits<double>::infinity();
  for (double t : uniform_grid(grid_size)) grid_min = std::min(grid_min, g.derivative(t));
  const double spacing = 2.0 / (grid_size - 1);

  CertifiedBound out;
  out.act = act.name();
  out.n = n;
  out.max_degree = max_degree;
  out.grid_min = grid_min;
  out.grid_slack = g.derivative_lipschitz() * spacing / 2.0;
  out.tail = tail.tail;
  out.delta_theta_n = tail.delta_theta_n;
  out.A_theta_n = tail.A_theta_n;
  out.T_lower = grid_min - out.grid_slack - out.tail;
  return out;
}

std::vector<TableRow> table_report(std::span<const std::string> acts, std::span<const int> dims,
                                   const TableOptions& options) {
  const int count = options.node_count > 0 ? options.node_count : default_node_count(options.max_degree);
  std::vector<TableRow> rows;
  for (const auto& id : acts) {
    const Activation& act = find_activation(id);
    for (int n : dims) {
      const Decomposition dec = decompose(act, n, options.max_degree, count);
      const GPrimeMinimum m = min_gprime(dec, options.grid_size);
      TableRow row;
      row.act = act.name();
      row.n = n;
      row.max_degree = options.max_degree;
      row.T_empirical = m.T;
      row.vacuous = m.vacuous;
      row.g_at_1 = layer_norm_constant(dec);
      row.ratio = row.T_empirical / row.g_at_1;
      if (act.is_smooth() && options.max_degree >= 1)
        row.T_certified =
            certified_T_lower(act, n, options.max_degree, options.certified_grid_size).T_lower;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

PlotData plot_data(const Activation& act, int n, int max_degree, int grid_size, int node_count) {
  if (grid_size < 2) throw PreconditionError("plot_data: grid must have at least two points");
  const int count = node_count > 0 ? node_count : default_node_count(max_degree);
  const Decomposition dec = decompose(act, n, max_degree, count);
  const GegenbauerBasis basis(n, max_degree);
  const GTheta g(dec);
  PlotData out;
  out.t = uniform_grid(grid_size);
  for (double t : out.t) {
    const auto phi = basis.evaluate_all(t);
    double approx = 0.0;
    for (int k = 0; k <= max_degree; ++k) approx += dec.coeffs[k] * phi[k];
    out.theta.push_back(act(t));
    out.approx.push_back(approx);
    out.g.push_back(g.value(t));
    out.gprime.push_back(g.derivative(t));
  }
  return out;
}

double coefficient_decay_slope(const Decomposition& dec, int k_min, int k_max, int parity) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int k = std::max(k_min, 1); k <= std::min(k_max, dec.max_degree); ++k) {
    if (parity >= 0 && k % 2 != parity) continue;
    const double a2 = dec.coeffs[k] * dec.coeffs[k];
    if (a2 == 0.0) continue;
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(a2);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m < 2) throw PreconditionError("coefficient_decay_slope: need at least two usable degrees");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace sunlayer
