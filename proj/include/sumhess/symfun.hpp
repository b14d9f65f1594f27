#pragma once

#include "sumhess/types.hpp"

#include <span>
#include <utility>
#include <vector>

namespace sumhess {

/// Elementary symmetric functions sigma_0..sigma_K of x, computed by the
/// one-pass recurrence e_j <- e_j + x_i e_{j-1} with a compensated (two-term)
/// inner update. K > n yields trailing zeros. O(nK) arithmetic.
SymTable elementary_all(const Spectrum& x, int K);

/// Recurrence on a raw coefficient vector (any length >= 0).
Vec sigma_table_raw(const Vec& x, int K);

/// sigma_k of x with the entries at `excluded` (0-based, distinct) removed.
/// Computed by rerunning the recurrence on the reduced sequence.
double sigma_excluding(const Spectrum& x, int k, std::span<const int> excluded);
double sigma_excluding_raw(const Vec& x, int k, std::span<const int> excluded);

/// Gradient of sigma_k: component i is sigma_{k-1} with slot i removed.
/// Requires 1 <= k <= n.
Vec grad_sigma(const Spectrum& x, int k);

/// Hessian of sigma_k: off-diagonal (p,q) entry is sigma_{k-2} with slots
/// p, q removed; the diagonal vanishes (sigma_k is multilinear).
/// Requires 2 <= k <= n.
Mat hess_sigma(const Spectrum& x, int k);

/// Decreasing rearrangement plus the permutation mapping output index to
/// input index. Ties keep the lower original index first.
std::pair<Spectrum, std::vector<int>> rearrange_desc(const Spectrum& x);

/// Residuals of the classical exclusion identities at degree k:
///   (a) s_k = s_{k;i} + x_i s_{k-1;i}           (per slot i)
///   (b) sum_i s_{k;i} = (n-k) s_k
///   (c) sum_i s_{k-1;i} x_i = k s_k
///   (d) sum_i s_{k-1;i} x_i^2 = s_1 s_k - (k+1) s_{k+1}
/// Relative residuals are scaled by the largest participating term, so
/// cancellation inside an identity does not inflate them.
struct IdentityReport {
    Vec per_slot_abs;   // identity (a), one entry per i
    Vec per_slot_rel;
    double sum_excl_abs, sum_excl_rel;       // identity (b)
    double sum_grad_abs, sum_grad_rel;       // identity (c)
    double sum_grad_sq_abs, sum_grad_sq_rel; // identity (d)
    double worst_rel;
};

IdentityReport check_identities(const Spectrum& x, int k);

} // namespace sumhess
