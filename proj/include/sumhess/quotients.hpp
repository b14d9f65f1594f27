#pragma once

#include "sumhess/types.hpp"

#include <span>

namespace sumhess {

/// Newton quotient q_k = sigma_k / sigma_{k-1}; q_1 = sigma_1.
/// Throws DegenerateDenominator when |sigma_{k-1}| <= 1e-300.
double newton_quotient(const Spectrum& x, int k);

/// q_k of x with the listed slots (0-based) removed.
double newton_quotient_excluding(const Spectrum& x, int k,
                                 std::span<const int> excluded);

/// Full real symmetric Hessian of q_k as a function of x; assembled in
/// closed form from exclusion sigmas. Requires x in Gamma_k so every
/// denominator along the quotient chain is positive.
Mat quotient_hessian(const Spectrum& x, int k);

/// xi^* H xi for the Hessian above; real for any complex direction.
double quotient_hessian_form(const Spectrum& x, int k, const CVec& xi);

/// | -d_xibar d_xi q_2  -  sum_i |xi_i - (x_i/s_1) s_1(xi)|^2 / s_1 |,
/// an exact identity; requires sigma_1(x) > 0.
double q2_identity_residual(const Spectrum& x, const CVec& xi);

/// RHS - LHS of the one-step Hessian recursion
///   d_xibar d_xi q_{k+1} <= sum_i x_i^2 d_xibar d_xi q_{k;i}
///                            / ((k+1)(q_{k;i} + x_i)^2).
/// Requires x in Gamma_{k+1} (see the note in the project docs: the stricter
/// cone keeps every denominator positive). Nonnegative up to roundoff.
double quotient_recursion_margin(const Spectrum& x, int k, const CVec& xi);

/// Margin of the chained lower bound for k >= 3:
///   (-sigma_{k-1} d_xibar d_xi q_k)
///     - C sum_{j=1}^{k-1} (prod of x_1..x_{k-1} without x_j)
///           ||perp of zeroed xi against zeroed x||^2.
/// Nonnegative certifies the bound for the supplied constant.
double chain_bound_margin(const Spectrum& x_desc, int k, const CVec& xi, double C);

/// Zeroes slot 0 of zeta and projects (zeta_k..zeta_n) orthogonal to
/// (x_k..x_n); indices 1-based in the formula, 0-based in code.
CVec project_tail(const Spectrum& x_desc, int k, CVec zeta);

/// Margin of the split-direction lower bound: after the tail projection,
///   (-sigma_{k-1} d_zetabar d_zeta q_k)
///     - C [ x_1..x_{k-1} x_k^2 sum_{j=2}^{k-1} |zeta_j|^2 / x_j^3
///           + x_1..x_{k-2} sum_{p=k}^{n} |zeta_p|^2 ].
double tail_projected_margin(const Spectrum& x_desc, int k, const CVec& zeta_raw,
                             double C);

/// Hessian of q_k on a raw vector (any length >= 1); zero matrix for k <= 1.
Mat quotient_hessian_raw(const Vec& x, int k);

} // namespace sumhess
