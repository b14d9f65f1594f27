#pragma once

#include "sumhess/types.hpp"

#include <cstdint>
#include <optional>

namespace sumhess {

/// Membership summary for the nested family of cones Gamma_1 > Gamma_2 > ...
struct ConeMembership {
    int k_index;  // largest k with x in Gamma_k; 0 means sigma_1 <= 0
    Vec sigmas;   // sigma_0..sigma_n
};

struct GammaCheck {
    bool inside;
    Vec margins;  // (sigma_1, ..., sigma_k); all must be strictly positive
};

/// x in Gamma_k iff sigma_j(x) > 0 for j = 1..k (strict, no epsilon slack).
/// k == 0 is the whole space.
GammaCheck in_gamma_k(const Spectrum& x, int k);

/// Largest k in {0..n} with x in Gamma_k.
int gamma_index(const Spectrum& x);
ConeMembership cone_membership(const Spectrum& x);

/// Membership via positivity of every distinct partial derivative of sigma_k
/// (each is an exclusion sigma of lower degree). Agrees with in_gamma_k on
/// every input; kept as an independent route.
bool derivative_positivity_check(const Spectrum& x, int k);

/// x_n + delta * x_1 for descending x with x_1 > 0; the dynamic
/// plurisubharmonic condition holds iff the result is positive.
double dynamic_psh_margin(const Spectrum& x_desc, double delta);

/// C * (sigma_k^{1/k} + |x_n|) - x_k for descending x in Gamma_k.
/// Nonnegative certifies the k-th entry bound with the supplied constant.
double kth_entry_bound_margin(const Spectrum& x_desc, int k, double C);

/// Under sigma_k <= A1 and sigma_{k+1} >= -A2 on Gamma_k, checks the uniform
/// entry floor min_i x_i + K >= 0 for the supplied constant K.
bool entry_floor_check(const Spectrum& x, int k, double A1, double A2, double K);

/// Deterministic cone samplers. `box` draws uniformly from [-1, 10]^n;
/// `orthant` draws a positive base plus Gaussian perturbation. Both reject
/// points outside Gamma_k; the returned spectrum is sorted descending.
enum class ConeSampler { Box, OrthantPerturbed };

std::optional<Spectrum> sample_gamma_k(int n, int k, ConeSampler how,
                                       std::uint64_t seed, std::uint64_t index);

struct AcceptStats {
    std::uint64_t accepted = 0;
    std::uint64_t tried = 0;
    double rate() const {
        return tried ? static_cast<double>(accepted) / static_cast<double>(tried) : 0.0;
    }
};

struct ConstantEstimate {
    double value;
    AcceptStats stats;
};

/// sup of x_k / (sigma_k^{1/k} + |x_n|) over accepted Gamma_k samples.
ConstantEstimate estimate_kth_entry_constant(int n, int k, ConeSampler how,
                                             std::uint64_t seed,
                                             std::uint64_t accepted_target);

/// sup of sigma_k / (x_1...x_k) over accepted descending Gamma_k samples.
ConstantEstimate estimate_sigma_product_constant(int n, int k, ConeSampler how,
                                                 std::uint64_t seed,
                                                 std::uint64_t accepted_target);

/// sup of -min_i x_i over Gamma_k samples satisfying sigma_k <= A1 and
/// sigma_{k+1} >= -A2.
ConstantEstimate estimate_entry_floor_constant(int n, int k, double A1, double A2,
                                               ConeSampler how, std::uint64_t seed,
                                               std::uint64_t accepted_target);

} // namespace sumhess
