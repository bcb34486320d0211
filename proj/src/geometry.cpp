#include "sunlayer/geometry.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "sunlayer/error.hpp"

namespace sunlayer {
namespace {

using u128 = unsigned __int128;

// C(m, r) exactly, or nullopt on 128-bit overflow.
std::optional<u128> binomial(int m, int r) {
  if (r < 0 || r > m) return u128{0};
  r = std::min(r, m - r);
  u128 c = 1;
  for (int i = 1; i <= r; ++i) {
    // c == C(m-r+i-1, i-1) here, so c * (m-r+i) is divisible by i.
    const u128 factor = static_cast<u128>(m - r + i);
    if (c > (~u128{0}) / factor) return std::nullopt;
    c = c * factor / static_cast<u128>(i);
  }
  return c;
}

int required_bits(int n, int k) {
  // log2 of (2k+n-1)(k+n-2)! / (k!(n-1)!)
  const double log2v =
      (std::log(2.0 * k + n - 1) + std::lgamma(k + n - 1.0) - std::lgamma(k + 1.0) -
       std::lgamma(static_cast<double>(n))) /
      std::numbers::ln2;
  return static_cast<int>(std::floor(log2v)) + 1;
}

}  // namespace

double sphere_volume(int n) {
  if (n < 0) throw PreconditionError("sphere_volume: n must be >= 0, got " + std::to_string(n));
  const double h = 0.5 * (n + 1);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

std::uint64_t harmonic_dimension(int n, int k) {
  if (n < 1 || k < 0)
    throw PreconditionError("harmonic_dimension: need n >= 1 and k >= 0 (n=" + std::to_string(n) +
                            ", k=" + std::to_string(k) + ")");
  if (k == 0) return 1;
  if (k == 1) return static_cast<std::uint64_t>(n) + 1;

  const auto hi = binomial(n + k, k);
  const auto lo = binomial(n + k - 2, k - 2);
  if (!hi || !lo) {
    const int bits = required_bits(n, k);
    throw OverflowError("harmonic_dimension(" + std::to_string(n) + ", " + std::to_string(k) +
                            ") needs about " + std::to_string(bits) + " bits",
                        bits);
  }
  const u128 value = *hi - *lo;
  if (value > static_cast<u128>(UINT64_MAX)) {
    const int bits = required_bits(n, k);
    throw OverflowError("harmonic_dimension(" + std::to_string(n) + ", " + std::to_string(k) +
                            ") needs " + std::to_string(bits) + " bits",
                        bits);
  }
  return static_cast<std::uint64_t>(value);
}

double harmonic_dimension_real(int n, int k) {
  return static_cast<double>(harmonic_dimension(n, k));
}

double monomial_sphere_moment(int n, std::span<const int> exponents) {
  if (n < 0 || exponents.size() != static_cast<std::size_t>(n) + 1)
    throw PreconditionError("monomial_sphere_moment: need n+1 exponents");
  double log_num = 0.0;
  double total = 0.0;
  for (int e : exponents) {
    if (e < 0) throw PreconditionError("monomial_sphere_moment: negative exponent");
    if (e % 2 != 0) return 0.0;
    const double b = 0.5 * (e + 1);
    log_num += std::lgamma(b);
    total += b;
  }
  // 2 * prod Gamma(b_i) / Gamma(sum b_i)
  return 2.0 * std::exp(log_num - std::lgamma(total));
}

}  // namespace sunlayer
