#ifndef SUNLAYER_FRAMES_HPP_
#define SUNLAYER_FRAMES_HPP_

#include <Eigen/Dense>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sunlayer {

/// Finite point set on S^n whose average integrates every polynomial of
/// total degree <= exactness_degree exactly (against the normalized measure).
struct DesignSet {
  std::string name;
  int n = 0;
  /// One unit vector of R^{n+1} per row.
  Eigen::MatrixXd points;
  int exactness_degree = 0;

  int size() const noexcept { return static_cast<int>(points.rows()); }
};

/// N equispaced points on S^1; trigonometric exactness N-1.
DesignSet design_circle(int count);

/// Known S^2 designs: "octahedron" (D=3), "icosahedron" (D=5), "dodecahedron" (D=5).
DesignSet design_registry(std::string_view name);
std::span<const std::string_view> design_registry_names();

/// Largest |average over points - normalized sphere moment| over every
/// monomial of total degree <= degree.
double design_check(const DesignSet& design, int degree);

/// G_ij = phi_{n,k}(sigma_i . sigma_j).
Eigen::MatrixXd gram_matrix(const DesignSet& design, int k);

struct FrameReport {
  int degree = 0;
  /// N / vol(S^n): the frame constant for the unnormalized L^2 inner product.
  double frame_constant = 0.0;
  /// N: the constant for the normalized sphere measure.
  double normalized_frame_constant = 0.0;
  /// max |G^2 - c G| / c
  double residual = 0.0;
  double trace = 0.0;
  double expected_trace = 0.0;
  int rank = 0;
  int expected_rank = 0;
  /// max over eigenvalues of min(|lambda|, |lambda - c|) / c
  double dichotomy_deviation = 0.0;
  double min_eigenvalue = 0.0;
  bool tight = false;
};

/// Tight-frame check for {F_k(sigma_i, .)} on H_k(S^n). Requires
/// exactness_degree >= 2k (PreconditionError otherwise).
FrameReport tight_frame_residual(const DesignSet& design, int k);

/// Kernels of one harmonic degree: eta_k = sum_i e_i F_k(sigma_i, .).
struct NoiseAtom {
  int degree = 0;
  Eigen::MatrixXd points;
  Eigen::VectorXd coeffs;
  std::string source;
};

struct NoiseSpec {
  int n = 0;
  std::vector<NoiseAtom> atoms;

  bool empty() const noexcept { return atoms.empty(); }
  int max_degree() const noexcept;
};

struct NoiseTerm {
  int degree;
  const DesignSet* design;
  std::vector<double> coeffs;
};

/// Build eta from design-supported atoms. Each design must satisfy
/// exactness_degree >= 2k and carry one coefficient per point.
NoiseSpec synthesize_noise(int n, std::span<const NoiseTerm> terms);

/// Add a single kernel e * F_k(sigma, .); no design requirement.
void add_single_atom(NoiseSpec& noise, int degree, const Eigen::VectorXd& sigma, double coeff);

struct ComponentNorm {
  int degree;
  double norm;
};

/// ||eta_k|| per degree via the Gram quadratic form, ascending degree.
/// Throws NumericalError if a quadratic form is below -1e-10.
std::vector<ComponentNorm> noise_component_norms(const NoiseSpec& noise);

/// sqrt(sum_k ||eta_k||^2)
double noise_norm(const NoiseSpec& noise);

/// Plain-text design format: a header line "n D", then one point per line
/// with whitespace-separated coordinates.
void write_design(std::ostream& out, const DesignSet& design);
DesignSet read_design(std::istream& in, std::string name = "file");

}  // namespace sunlayer

#endif  // SUNLAYER_FRAMES_HPP_
