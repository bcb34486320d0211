#include "sunlayer/frames.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "sunlayer/error.hpp"
#include "sunlayer/gegenbauer.hpp"
#include "sunlayer/geometry.hpp"

namespace sunlayer {
namespace {

constexpr std::array<std::string_view, 3> kRegistry = {"octahedron", "icosahedron", "dodecahedron"};

void normalize_rows(Eigen::MatrixXd& pts) {
  for (Eigen::Index i = 0; i < pts.rows(); ++i) pts.row(i).normalize();
}

// All cyclic permutations of (a, b, c) with every sign combination of the
// nonzero entries.
std::vector<Eigen::Vector3d> cyclic_signed(double a, double b, double c) {
  std::vector<Eigen::Vector3d> out;
  const std::array<double, 3> base = {a, b, c};
  for (int shift = 0; shift < 3; ++shift) {
    for (int signs = 0; signs < 8; ++signs) {
      Eigen::Vector3d v;
      bool skip = false;
      for (int j = 0; j < 3; ++j) {
        const double x = base[(j + shift) % 3];
        const bool negative = (signs >> j) & 1;
        if (x == 0.0 && negative) skip = true;
        v(j) = negative ? -x : x;
      }
      if (!skip) out.push_back(v);
    }
  }
  return out;
}

Eigen::MatrixXd stack(const std::vector<Eigen::Vector3d>& rows) {
  Eigen::MatrixXd m(rows.size(), 3);
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(i) = rows[i].transpose();
  return m;
}

double clamp_dot(double d) { return std::clamp(d, -1.0, 1.0); }

// Visit every exponent vector of length `dims` with total degree <= max_total.
template <class F>
void for_each_monomial(int dims, int max_total, F&& visit) {
  std::vector<int> exps(dims, 0);
  auto rec = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == dims) {
      visit(exps);
      return;
    }
    for (int e = 0; e <= remaining; ++e) {
      exps[pos] = e;
      self(self, pos + 1, remaining - e);
    }
    exps[pos] = 0;
  };
  rec(rec, 0, max_total);
}

}  // namespace

DesignSet design_circle(int count) {
  if (count < 1) throw PreconditionError("design_circle: need at least one point");
  DesignSet d;
  d.name = "circle" + std::to_string(count);
  d.n = 1;
  d.exactness_degree = count - 1;
  d.points.resize(count, 2);
  for (int i = 0; i < count; ++i) {
    const double a = 2.0 * std::numbers::pi * i / count;
    d.points(i, 0) = std::cos(a);
    d.points(i, 1) = std::sin(a);
  }
  return d;
}

DesignSet design_registry(std::string_view name) {
  constexpr double phi = std::numbers::phi;
  DesignSet d;
  d.name = std::string(name);
  d.n = 2;
  if (name == "octahedron") {
    d.points = stack(cyclic_signed(1.0, 0.0, 0.0));
    d.exactness_degree = 3;
  } else if (name == "icosahedron") {
    d.points = stack(cyclic_signed(0.0, 1.0, phi));
    d.exactness_degree = 5;
  } else if (name == "dodecahedron") {
    auto rows = cyclic_signed(0.0, 1.0 / phi, phi);
    for (int s = 0; s < 8; ++s)
      rows.emplace_back(s & 1 ? -1.0 : 1.0, s & 2 ? -1.0 : 1.0, s & 4 ? -1.0 : 1.0);
    d.points = stack(rows);
    d.exactness_degree = 5;
  } else {
    throw PreconditionError("design_registry: unknown design '" + std::string(name) + "'");
  }
  normalize_rows(d.points);
  return d;
}

std::span<const std::string_view> design_registry_names() { return kRegistry; }

double design_check(const DesignSet& design, int degree) {
  if (degree < 0) throw PreconditionError("design_check: degree must be >= 0");
  const int dims = design.n + 1;
  const double vol = sphere_volume(design.n);
  const int count = design.size();
  double worst = 0.0;
  for_each_monomial(dims, degree, [&](const std::vector<int>& exps) {
    double avg = 0.0;
    for (int i = 0; i < count; ++i) {
      double term = 1.0;
      for (int j = 0; j < dims; ++j) term *= std::pow(design.points(i, j), exps[j]);
      avg += term;
    }
    avg /= count;
    worst = std::max(worst, std::abs(avg - monomial_sphere_moment(design.n, exps) / vol));
  });
  return worst;
}

Eigen::MatrixXd gram_matrix(const DesignSet& design, int k) {
  if (k < 0) throw PreconditionError("gram_matrix: degree must be >= 0");
  const GegenbauerBasis basis(design.n, k);
  const int count = design.size();
  Eigen::MatrixXd g(count, count);
  for (int i = 0; i < count; ++i) {
    for (int j = i; j < count; ++j) {
      const double v =
          i == j ? basis.evaluate(k, 1.0)
                 : basis.evaluate(k, clamp_dot(design.points.row(i).dot(design.points.row(j))));
      g(i, j) = v;
      g(j, i) = v;
    }
  }
  return g;
}

FrameReport tight_frame_residual(const DesignSet& design, int k) {
  if (design.exactness_degree < 2 * k)
    throw PreconditionError("tight_frame_residual: design " + design.name + " has exactness " +
                            std::to_string(design.exactness_degree) + " < 2k = " +
                            std::to_string(2 * k));
  const Eigen::MatrixXd g = gram_matrix(design, k);
  const double vol = sphere_volume(design.n);
  const int count = design.size();
  const double alpha = harmonic_dimension_real(design.n, k);

  FrameReport r;
  r.degree = k;
  r.frame_constant = count / vol;
  r.normalized_frame_constant = count;
  const double c = r.frame_constant;
  r.residual = (g * g - c * g).cwiseAbs().maxCoeff() / c;
  r.trace = g.trace();
  r.expected_trace = count * alpha / vol;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("tight_frame_residual: eigen-solver failed");
  const auto& ev = solver.eigenvalues();
  r.min_eigenvalue = ev.minCoeff();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double to_zero = std::abs(ev(i));
    const double to_c = std::abs(ev(i) - c);
    r.dichotomy_deviation = std::max(r.dichotomy_deviation, std::min(to_zero, to_c) / c);
    if (to_c < to_zero) ++r.rank;
  }
  r.expected_rank = static_cast<int>(std::min<double>(count, alpha));
  r.tight = r.residual < 1e-9 && r.rank == r.expected_rank &&
            std::abs(r.trace - r.expected_trace) <= 1e-9 * r.expected_trace;
  return r;
}

int NoiseSpec::max_degree() const noexcept {
  int m = -1;
  for (const auto& a : atoms) m = std::max(m, a.degree);
  return m;
}

NoiseSpec synthesize_noise(int n, std::span<const NoiseTerm> terms) {
  NoiseSpec noise;
  noise.n = n;
  for (const auto& term : terms) {
    if (term.design == nullptr) throw PreconditionError("synthesize_noise: missing design");
    const DesignSet& d = *term.design;
    if (d.n != n) throw PreconditionError("synthesize_noise: design dimension mismatch");
    if (term.degree < 0 || d.exactness_degree < 2 * term.degree)
      throw PreconditionError("synthesize_noise: design " + d.name + " lacks exactness 2k for k=" +
                              std::to_string(term.degree));
    if (static_cast<int>(term.coeffs.size()) != d.size())
      throw PreconditionError("synthesize_noise: need one coefficient per design point");
    NoiseAtom atom;
    atom.degree = term.degree;
    atom.points = d.points;
    atom.coeffs = Eigen::Map<const Eigen::VectorXd>(term.coeffs.data(), term.coeffs.size());
    atom.source = d.name;
    noise.atoms.push_back(std::move(atom));
  }
  return noise;
}

void add_single_atom(NoiseSpec& noise, int degree, const Eigen::VectorXd& sigma, double coeff) {
  if (sigma.size() != noise.n + 1) throw PreconditionError("add_single_atom: point dimension mismatch");
  if (degree < 0) throw PreconditionError("add_single_atom: degree must be >= 0");
  NoiseAtom atom;
  atom.degree = degree;
  atom.points = sigma.normalized().transpose();
  atom.coeffs = Eigen::VectorXd::Constant(1, coeff);
  atom.source = "single";
  noise.atoms.push_back(std::move(atom));
}

std::vector<ComponentNorm> noise_component_norms(const NoiseSpec& noise) {
  // Gather every kernel of a degree: cross terms between atoms of the same
  // degree contribute, different degrees are orthogonal.
  std::map<int, std::pair<std::vector<Eigen::RowVectorXd>, std::vector<double>>> by_degree;
  for (const auto& atom : noise.atoms) {
    auto& [pts, cs] = by_degree[atom.degree];
    for (Eigen::Index i = 0; i < atom.points.rows(); ++i) {
      pts.push_back(atom.points.row(i));
      cs.push_back(atom.coeffs(i));
    }
  }
  std::vector<ComponentNorm> out;
  for (const auto& [k, entry] : by_degree) {
    const auto& [pts, cs] = entry;
    const GegenbauerBasis basis(noise.n, k);
    double q = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = 0; j < pts.size(); ++j)
        q += cs[i] * cs[j] * basis.evaluate(k, i == j ? 1.0 : clamp_dot(pts[i].dot(pts[j])));
    if (q < -1e-10) {
      std::ostringstream msg;
      msg << "noise_component_norms: Gram quadratic form " << q << " < 0 at degree " << k;
      throw NumericalError(msg.str());
    }
    out.push_back({k, std::sqrt(std::max(q, 0.0))});
  }
  return out;
}

double noise_norm(const NoiseSpec& noise) {
  double s = 0.0;
  for (const auto& c : noise_component_norms(noise)) s += c.norm * c.norm;
  return std::sqrt(s);
}

void write_design(std::ostream& out, const DesignSet& design) {
  out << design.n << ' ' << design.exactness_degree << '\n';
  char buf[64];
  for (Eigen::Index i = 0; i < design.points.rows(); ++i) {
    for (Eigen::Index j = 0; j < design.points.cols(); ++j) {
      auto res = std::to_chars(buf, buf + sizeof buf, design.points(i, j));
      if (j > 0) out << ' ';
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

DesignSet read_design(std::istream& in, std::string name) {
  DesignSet d;
  d.name = std::move(name);
  std::string line;
  if (!std::getline(in, line)) throw PreconditionError("read_design: missing header");
  {
    std::istringstream header(line);
    if (!(header >> d.n >> d.exactness_degree) || d.n < 1)
      throw PreconditionError("read_design: malformed header '" + line + "'");
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<double> row;
    const char* p = line.data();
    const char* end = p + line.size();
    while (p < end) {
      while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
      if (p == end) break;
      double v;
      auto res = std::from_chars(p, end, v);
      if (res.ec != std::errc()) throw PreconditionError("read_design: bad number in '" + line + "'");
      row.push_back(v);
      p = res.ptr;
    }
    if (static_cast<int>(row.size()) != d.n + 1)
      throw PreconditionError("read_design: expected " + std::to_string(d.n + 1) + " coordinates");
    rows.push_back(std::move(row));
  }
  d.points.resize(static_cast<Eigen::Index>(rows.size()), d.n + 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j <= d.n; ++j) d.points(i, j) = rows[i][j];
    if (std::abs(d.points.row(i).norm() - 1.0) > 1e-12)
      throw PreconditionError("read_design: point " + std::to_string(i) + " is not a unit vector");
  }
  return d;
}

}  // namespace sunlayer
