#ifndef SUNLAYER_ACTIVATIONS_HPP_
#define SUNLAYER_ACTIVATIONS_HPP_

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sunlayer {

/// Highest derivative order any activation provides.
inline constexpr int kMaxDerivativeOrder = 4;

/// A scalar activation with closed-form derivatives up to order 4.
///
/// `smoothness_order` is the largest m such that the function is C^m on R.
/// Non-smooth members have a single kink at 0; there, orders up to
/// smoothness_order + 1 are answered with the right derivative and higher
/// orders raise SmoothnessError.
class Activation {
 public:
  using Evaluator = std::function<double(int order, double t)>;

  Activation(std::string name, int smoothness_order, bool kink_at_zero, Evaluator eval);

  const std::string& name() const noexcept { return name_; }
  int smoothness_order() const noexcept { return smoothness_order_; }
  bool is_smooth() const noexcept { return smoothness_order_ >= kMaxDerivativeOrder; }
  bool has_kink() const noexcept { return kink_at_zero_; }

  /// d^order/dt^order theta(t). Throws PreconditionError for order outside
  /// 0..4 and SmoothnessError for unsupported orders at the kink.
  double evaluate(int order, double t) const;
  double operator()(double t) const { return evaluate(0, t); }

 private:
  std::string name_;
  int smoothness_order_;
  bool kink_at_zero_;
  Evaluator eval_;
};

/// Look up a catalog member by its CLI identifier. Throws PreconditionError
/// for unknown names.
const Activation& find_activation(std::string_view id);

/// CLI identifiers of every catalog member.
std::span<const std::string_view> activation_ids();

/// The six smooth activations of the summary table, in row order.
std::span<const std::string_view> table_activation_ids();

/// theta(t) = value for all t.
Activation constant_activation(double value);

/// theta(t) = sum_j coeffs[j] t^j (monomial basis), smooth.
Activation polynomial_activation(std::vector<double> coeffs);

/// Zonal Laplace-Beltrami operator on S^n applied to theta(omega . tau):
/// theta''(t)(1 - t^2) - n t theta'(t).
double spherical_laplacian(const Activation& act, int n, double t);

/// The zonal operator above applied twice. Needs theta up to order 4, so
/// every non-C^4 activation is rejected with SmoothnessError.
double bi_laplacian(const Activation& act, int n, double t);

}  // namespace sunlayer

#endif  // SUNLAYER_ACTIVATIONS_HPP_
