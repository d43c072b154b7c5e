#pragma once

namespace fraclab {

/// Density p_1 of the fractional heat semigroup at distance r from the origin
/// (time 1, symbol exp(-|xi|^{2s})). d in {1, 2}.
double fractional_heat_kernel(double s, int dimension, double r);

/// A constant C with p_t(y) >= C t^{-d/(2s)} (1 + |t^{-1/(2s)} y|^{d+2s})^{-1}
/// for all t > 0 and y, found as 0.9 times the sampled infimum of
/// p_1(z) (1 + |z|^{d+2s}) including its large-|z| limit c_{s,d}.
double heat_kernel_lower_constant(double s, int dimension);

/// c = 2^{-d-2s-1} d^{-1} C theta omega_d, the far-field constant in the bound
/// S_t[theta chi_{B_1}](x) >= c t |x|^{-d-2s} for t >= 1, |x| >= t^{1/(2s)} + 1.
double far_field_constant(double s, int dimension, double theta);

}  // namespace fraclab
