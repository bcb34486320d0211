#ifndef SUNLAYER_GEOMETRY_HPP_
#define SUNLAYER_GEOMETRY_HPP_

#include <cstdint>
#include <span>

namespace sunlayer {

/// Surface measure of the unit sphere S^n in R^{n+1}: 2 pi^{(n+1)/2} / Gamma((n+1)/2).
double sphere_volume(int n);

/// Dimension of the space of degree-k spherical harmonics on S^n.
///
/// Computed exactly as C(n+k, k) - C(n+k-2, k-2) in 128-bit arithmetic.
/// Throws OverflowError (carrying the bit width the result needs) when the
/// value does not fit in 64 bits.
std::uint64_t harmonic_dimension(int n, int k);

/// harmonic_dimension() converted to double.
double harmonic_dimension_real(int n, int k);

/// Integral over S^n (unnormalized surface measure) of prod_i x_i^{e_i}.
/// `exponents` must have n+1 entries.
double monomial_sphere_moment(int n, std::span<const int> exponents);

}  // namespace sunlayer

#endif  // SUNLAYER_GEOMETRY_HPP_
