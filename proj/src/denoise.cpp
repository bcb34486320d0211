#include "sunlayer/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "sunlayer/error.hpp"
#include "sunlayer/gegenbauer.hpp"

namespace sunlayer {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double clamp_dot(double d) { return std::clamp(d, -1.0, 1.0); }

Eigen::VectorXd project_tangent(const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
  return v - x.dot(v) * x;
}

struct RunResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double gradient_norm = 0.0;
  bool converged = false;
};

struct StepRule {
  double initial_step;
  double armijo_slope;
  double shrink;
  int max_iterations;
  double stop_tol;
};

// Riemannian first-order method on the sphere: maximize sign * f along the
// tangent gradient, retract by normalization, Armijo backtracking. Once f can
// no longer resolve the Armijo gain, a step is taken only if it shrinks the
// gradient, so runs settle onto the critical point instead of stalling or
// drifting around it.
template <class Value, class Gradient>
RunResult run_projected(const Value& f, const Gradient& grad, Eigen::VectorXd x, double sign,
                        const StepRule& rule) {
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  constexpr double kMinStep = 1e-20;
  double fx = sign * f(x);
  double step = rule.initial_step;
  RunResult out;
  for (int it = 0; it < rule.max_iterations; ++it) {
    const Eigen::VectorXd g = sign * grad(x);
    const double gnorm2 = g.squaredNorm();
    if (std::sqrt(gnorm2) < rule.stop_tol) {
      out.converged = true;
      break;
    }
    const double slack = 8.0 * kEps * (std::abs(fx) + 1.0);
    bool accepted = false;
    while (step >= kMinStep) {
      Eigen::VectorXd trial = (x + step * g).normalized();
      const double ft = sign * f(trial);
      const double gain = rule.armijo_slope * step * gnorm2;
      const bool accept = gain > slack ? ft >= fx + gain
                                       : ft >= fx - slack && grad(trial).squaredNorm() < gnorm2;
      if (accept) {
        x = std::move(trial);
        fx = ft;
        accepted = true;
        break;
      }
      step *= rule.shrink;
    }
    if (!accepted) break;
    step = std::min(step / rule.shrink, 1e6);
  }
  out.gradient_norm = grad(x).norm();
  out.converged = out.converged || out.gradient_norm < rule.stop_tol;
  out.x = std::move(x);
  out.value = sign * fx;
  return out;
}

}  // namespace

std::mt19937_64 derive_stream(std::uint64_t master, std::uint64_t i, std::uint64_t j) {
  const std::uint64_t s = splitmix64(splitmix64(splitmix64(master) ^ i) ^ (j * 0xD1B54A32D192ED03ULL));
  return std::mt19937_64(s);
}

Eigen::VectorXd random_unit_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  do {
    for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  } while (v.norm() < 1e-12);
  return v.normalized();
}

// ---------------------------------------------------------------------------
// Zonal objective

ZonalObjective::ZonalObjective(Decomposition dec, Eigen::VectorXd x_sharp, NoiseSpec noise)
    : dec_(std::move(dec)),
      x_sharp_(std::move(x_sharp)),
      noise_(std::move(noise)),
      g_(dec_),
      basis_(dec_.n, dec_.max_degree) {
  if (x_sharp_.size() != dec_.n + 1)
    throw PreconditionError("ZonalObjective: x# must live in R^{n+1}");
  if (std::abs(x_sharp_.norm() - 1.0) > 1e-12)
    throw PreconditionError("ZonalObjective: x# must be a unit vector");
  if (noise_.empty()) noise_.n = dec_.n;
  if (noise_.n != dec_.n) throw PreconditionError("ZonalObjective: noise dimension mismatch");
  if (noise_.max_degree() > dec_.max_degree)
    throw PreconditionError("ZonalObjective: noise degree exceeds decomposition degree");
}

double ZonalObjective::value(const Eigen::VectorXd& x) const {
  double v = g_.value(clamp_dot(x.dot(x_sharp_)));
  for (const auto& atom : noise_.atoms) {
    const double a = dec_.coeffs[atom.degree];
    if (a == 0.0) continue;
    double s = 0.0;
    for (Eigen::Index i = 0; i < atom.points.rows(); ++i)
      s += atom.coeffs(i) * basis_.evaluate(atom.degree, clamp_dot(atom.points.row(i).dot(x)));
    v += a * s;
  }
  return v;
}

Eigen::VectorXd ZonalObjective::noise_gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd b = Eigen::VectorXd::Zero(x.size());
  for (const auto& atom : noise_.atoms) {
    const double a = dec_.coeffs[atom.degree];
    if (a == 0.0 || atom.degree == 0) continue;
    for (Eigen::Index i = 0; i < atom.points.rows(); ++i) {
      const double d = basis_.evaluate_derivative(atom.degree, clamp_dot(atom.points.row(i).dot(x)));
      b += (a * atom.coeffs(i) * d) * atom.points.row(i).transpose();
    }
  }
  return b;
}

Eigen::VectorXd ZonalObjective::ambient_gradient(const Eigen::VectorXd& x) const {
  return g_.derivative(clamp_dot(x.dot(x_sharp_))) * x_sharp_ + noise_gradient(x);
}

Eigen::VectorXd ZonalObjective::gradient(const Eigen::VectorXd& x) const {
  return project_tangent(x, ambient_gradient(x));
}

ZonalObjective ZonalObjective::rotated(const Eigen::MatrixXd& q) const {
  NoiseSpec noise = noise_;
  for (auto& atom : noise.atoms) atom.points = atom.points * q.transpose();
  return ZonalObjective(dec_, q * x_sharp_, std::move(noise));
}

double objective_value(const ZonalObjective& obj, const Eigen::VectorXd& x) { return obj.value(x); }

Eigen::VectorXd objective_gradient(const ZonalObjective& obj, const Eigen::VectorXd& x) {
  return obj.gradient(x);
}

CriticalPointSearch find_critical_points(const ZonalObjective& obj, const AscentOptions& options) {
  if (options.restarts < 1) throw PreconditionError("find_critical_points: restarts must be >= 1");
  const StepRule rule{options.initial_step, options.armijo_slope, options.shrink,
                      options.max_iterations, options.stop_tol};
  const double sign = options.ascent ? 1.0 : -1.0;
  const int dim = obj.dimension() + 1;
  auto f = [&](const Eigen::VectorXd& x) { return obj.value(x); };
  auto g = [&](const Eigen::VectorXd& x) { return obj.gradient(x); };

  CriticalPointSearch out;
  for (int r = 0; r < options.restarts; ++r) {
    auto rng = derive_stream(options.seed, static_cast<std::uint64_t>(r), options.ascent ? 0 : 1);
    RunResult run = run_projected(f, g, random_unit_vector(dim, rng), sign, rule);
    if (!run.converged) {
      ++out.non_converged;
      continue;
    }
    CriticalPoint cp;
    cp.x = run.x;
    cp.value = run.value;
    cp.gradient_norm = run.gradient_norm;
    cp.correlation = run.x.dot(obj.x_sharp());
    out.runs.push_back(cp);
    auto same = std::find_if(out.points.begin(), out.points.end(), [&](const CriticalPoint& p) {
      return (p.x - cp.x).norm() < options.merge_angle;
    });
    if (same == out.points.end()) {
      out.points.push_back(std::move(cp));
    } else {
      ++same->hits;
    }
  }
  return out;
}

double epsilon_bound(const Decomposition& dec, const NoiseSpec& noise) {
  double eps = 0.0;
  for (const auto& atom : noise.atoms) {
    if (atom.degree == 0) continue;
    eps += derivative_sup(dec.n, atom.degree) * std::abs(dec.coeffs.at(atom.degree)) *
           atom.coeffs.cwiseAbs().sum();
  }
  return eps;
}

double epsilon_norm_form(const Decomposition& dec, const NoiseSpec& noise) {
  double eps = 0.0;
  for (const auto& c : noise_component_norms(noise)) {
    if (c.degree == 0) continue;
    eps += derivative_sup(dec.n, c.degree) * std::abs(dec.coeffs.at(c.degree)) * c.norm;
  }
  return eps;
}

double epsilon_exact(const ZonalObjective& obj, const Eigen::VectorXd& x) {
  return obj.noise_gradient(x).norm();
}

TheoremReport verify_theorem(const ZonalObjective& obj, double T, const TheoremOptions& options) {
  TheoremReport report;
  report.T = T;
  report.eps_bound = epsilon_bound(obj.decomposition(), obj.noise());
  report.eps_norm_form = epsilon_norm_form(obj.decomposition(), obj.noise());
  report.guaranteed_correlation = 1.0 - 2.0 * report.eps_bound / (T + report.eps_bound);
  report.applicable = T > 0.0 && report.eps_bound < T;

  AscentOptions ascent;
  ascent.restarts = options.restarts;
  ascent.seed = options.seed;
  std::vector<AscentOptions> passes = {ascent};
  if (options.include_descent) {
    ascent.ascent = false;
    passes.push_back(ascent);
  }
  for (const auto& pass : passes) {
    const auto search = find_critical_points(obj, pass);
    report.non_converged += search.non_converged;
    for (const auto& cp : search.runs) {
      report.trials.push_back({cp.x, cp.correlation, cp.value, pass.ascent});
      report.eps_exact_sup = std::max(report.eps_exact_sup, epsilon_exact(obj, cp.x));
    }
  }

  auto rng = derive_stream(options.seed, 0xE5u, 2);
  for (int s = 0; s < options.eps_samples; ++s) {
    const Eigen::VectorXd x = random_unit_vector(obj.dimension() + 1, rng);
    report.eps_exact_sup = std::max(report.eps_exact_sup, epsilon_exact(obj, x));
  }

  for (const auto& trial : report.trials) {
    report.min_found_correlation = std::min(report.min_found_correlation, std::abs(trial.correlation));
    if (report.applicable && std::abs(trial.correlation) < report.guaranteed_correlation - options.tolerance)
      ++report.violations;
  }
  report.passed = !report.applicable || report.violations == 0;
  return report;
}

TheoremInstance random_theorem_instance(const TheoremSuiteOptions& options, std::uint64_t seed,
                                        int index) {
  if (options.acts.empty() || options.dims.empty())
    throw PreconditionError("random_theorem_instance: empty activation or dimension list");
  auto rng = derive_stream(seed, static_cast<std::uint64_t>(index), 7);
  std::normal_distribution<double> normal;
  const int K = options.max_degree;

  for (int attempt = 0; attempt < 100; ++attempt) {
    const std::string& id = options.acts[rng() % options.acts.size()];
    const int n = options.dims[rng() % options.dims.size()];
    const Activation& act = find_activation(id);
    Decomposition dec = decompose(act, n, K, default_node_count(K));
    const GPrimeMinimum m = min_gprime(dec);
    if (m.vacuous) continue;

    // Degrees with a nonnegligible coefficient: only these can perturb the objective.
    std::vector<int> live;
    double amax = 0.0;
    for (int k = 1; k <= K; ++k) amax = std::max(amax, std::abs(dec.coeffs[k]));
    for (int k = 1; k <= K; ++k)
      if (std::abs(dec.coeffs[k]) > 1e-8 * amax) live.push_back(k);
    if (live.empty()) continue;
    auto pick = [&] { return live[rng() % live.size()]; };

    NoiseSpec noise;
    noise.n = n;
    const int atoms = 1 + static_cast<int>(rng() % 3);
    std::vector<DesignSet> designs;
    designs.reserve(atoms);
    std::vector<NoiseTerm> terms;
    for (int a = 0; a < atoms; ++a) {
      const int k = pick();
      if (n == 1) {
        designs.push_back(design_circle(2 * k + 1 + static_cast<int>(rng() % 5)));
      } else if (n == 2 && k <= 2) {
        designs.push_back(design_registry("icosahedron"));
      } else {
        add_single_atom(noise, k, random_unit_vector(n + 1, rng), normal(rng));
        continue;
      }
      std::vector<double> e(designs.back().size());
      for (double& v : e) v = normal(rng);
      terms.push_back({k, &designs.back(), std::move(e)});
    }
    NoiseSpec framed = synthesize_noise(n, terms);
    for (auto& atom : framed.atoms) noise.atoms.push_back(std::move(atom));

    const double eps = epsilon_bound(dec, noise);
    if (!(eps > 0.0)) continue;
    std::uniform_real_distribution<double> ratio_dist(options.min_ratio, options.max_ratio);
    const double ratio = ratio_dist(rng);
    const double scale = ratio * m.T / eps;
    for (auto& atom : noise.atoms) atom.coeffs *= scale;

    Eigen::VectorXd x_sharp = random_unit_vector(n + 1, rng);
    return TheoremInstance{id, n, ZonalObjective(std::move(dec), std::move(x_sharp), std::move(noise)),
                           m.T, ratio};
  }
  throw NumericalError("random_theorem_instance: no applicable instance found");
}

// ---------------------------------------------------------------------------
// Finite layer

FiniteLayer::FiniteLayer(Eigen::MatrixXd rows, const Activation& act)
    : rows_(std::move(rows)), act_(act) {
  for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
    if (std::abs(rows_.row(i).norm() - 1.0) > 1e-10)
      throw PreconditionError("FiniteLayer: row " + std::to_string(i) + " does not have unit norm");
  }
}

Eigen::VectorXd FiniteLayer::apply(const Eigen::VectorXd& x) const {
  Eigen::VectorXd z = rows_ * x;
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = act_.evaluate(0, z(i));
  return z;
}

Eigen::VectorXd FiniteLayer::residual_gradient(const Eigen::VectorXd& x,
                                               const Eigen::VectorXd& y) const {
  const Eigen::VectorXd z = rows_ * x;
  Eigen::VectorXd w(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i)
    w(i) = 2.0 * act_.evaluate(1, z(i)) * (act_.evaluate(0, z(i)) - y(i));
  return project_tangent(x, rows_.transpose() * w);
}

Eigen::VectorXd finite_layer_apply(const FiniteLayer& layer, const Eigen::VectorXd& x) {
  return layer.apply(x);
}

Eigen::MatrixXd random_row_normalized(int rows, int cols, std::mt19937_64& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) m.row(i) = random_unit_vector(cols, rng).transpose();
  return m;
}

namespace {

std::pair<double, double> mean_std(const std::vector<double>& v) {
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (v.size() - 1))};
}

}  // namespace

ExperimentResult synthetic_experiment(const SyntheticConfig& config) {
  if (config.trials < 1) throw PreconditionError("synthetic_experiment: trials must be >= 1");
  if (config.restarts < 1) throw PreconditionError("synthetic_experiment: restarts must be >= 1");
  if (config.n < 1 || config.rows < 1) throw PreconditionError("synthetic_experiment: bad shape");
  const int dim = config.n + 1;

  auto matrix_rng = derive_stream(config.seed, 0, 0);
  const Eigen::MatrixXd b = random_row_normalized(config.rows, dim, matrix_rng);

  // Per-trial draws shared across activations and noise levels.
  std::vector<Eigen::VectorXd> x_sharps, directions;
  std::vector<std::vector<Eigen::VectorXd>> starts(config.trials);
  for (int t = 0; t < config.trials; ++t) {
    auto rng = derive_stream(config.seed, 1, static_cast<std::uint64_t>(t));
    x_sharps.push_back(random_unit_vector(dim, rng));
    directions.push_back(random_unit_vector(config.rows, rng));
    for (int r = 0; r < config.restarts; ++r) {
      auto srng = derive_stream(config.seed, 2 + static_cast<std::uint64_t>(r),
                                static_cast<std::uint64_t>(t));
      starts[t].push_back(random_unit_vector(dim, srng));
    }
  }

  const StepRule rule{1.0, 1e-4, 0.5, config.max_iterations, config.stop_tol};
  ExperimentResult result;
  for (const auto& id : config.acts) {
    const FiniteLayer layer(b, find_activation(id));
    for (double level : config.noise_levels) {
      std::vector<double> dists, corrs;
      int non_converged = 0;
      for (int t = 0; t < config.trials; ++t) {
        const Eigen::VectorXd clean = layer.apply(x_sharps[t]);
        const Eigen::VectorXd y = clean + level * directions[t];
        auto f = [&](const Eigen::VectorXd& x) { return (layer.apply(x) - y).squaredNorm(); };
        auto g = [&](const Eigen::VectorXd& x) { return layer.residual_gradient(x, y); };
        RunResult best;
        best.value = std::numeric_limits<double>::infinity();
        for (const auto& start : starts[t]) {
          RunResult run = run_projected(f, g, start, -1.0, rule);
          if (!run.converged) ++non_converged;
          if (run.value < best.value) best = std::move(run);
        }
        dists.push_back((layer.apply(best.x) - clean).norm());
        corrs.push_back(best.x.dot(x_sharps[t]));
      }
      const auto [md, sd] = mean_std(dists);
      const auto [mc, sc] = mean_std(corrs);
      result.rows.push_back({id, level, md, sd, mc, sc, non_converged});
    }
  }
  return result;
}

}  // namespace sunlayer
