#pragma once

#include "sumhess/sum_operator.hpp"
#include "sumhess/types.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace sumhess {

/// Parameters of the key concavity inequality. The quadratic form certified
/// nonnegative (for all complex directions xi) is
///   -sum_{p!=q} F_pq xi_p conj(xi_q) / F
///   + 2 |sum_i F_i xi_i|^2 / F^2
///   + sum_{i>1} F_i |xi_i|^2 / ((1+delta) lambda_1 F)
///   - (1-gamma) F_1 |xi_1|^2 / (lambda_1 F),
/// with F = sigma_k and its derivatives when op.m() == 0.
struct ConcavityParams {
    double gamma = 0.5;
    double delta = 1e-3;
    HessianSumSpec op;

    ConcavityParams(double gamma_, double delta_, HessianSumSpec op_)
        : gamma(gamma_), delta(delta_), op(std::move(op_)) {
        if (!(gamma > 0.0 && gamma < 1.0))
            throw PreconditionError("ConcavityParams: gamma must lie in (0,1)");
        if (!(delta > 0.0 && delta < 1.0))
            throw PreconditionError("ConcavityParams: delta must lie in (0,1)");
        if (op.k() >= op.n())
            throw PreconditionError("ConcavityParams: need k < n");
        if (op.k() < 2)
            throw PreconditionError("ConcavityParams: need k >= 2");
    }
};

/// Real symmetric coefficient matrix of the inequality's Hermitian form at
/// lambda (descending, in Gamma_k, lambda_1 > 0, lambda_n >= -delta lambda_1).
Mat margin_matrix_sigma(const Spectrum& lambda_desc, const ConcavityParams& p);

/// Same structure through the lift (op.m() >= 1 allowed; coincides with the
/// sigma version when m == 0). Requires lifted membership in Gamma_k^{n+m}.
Mat margin_matrix_F(const Spectrum& lambda_desc, const ConcavityParams& p);

/// Smallest eigenvalue with a unit minimizer. The matrices are heavily
/// graded in the large-lambda_1 regime (entries spanning many decades), so
/// the plain eigensolve is cross-checked against a Jacobi-scaled congruence
/// (which preserves the sign of the minimum by Sylvester inertia and is
/// accurate for graded matrices); the reported value is the smaller Rayleigh
/// quotient of the two candidate minimizers.
struct EigCertificate {
    double min_margin;
    Vec minimizer;
};
EigCertificate certify_min_margin(const Mat& M);

struct MarginReport {
    Vec lambda;        // sorted descending
    double min_margin;
    Vec minimizer;     // unit vector; real (coefficient matrices are real symmetric)
    double sigma_level;  // sigma_k(lambda) for m = 0, F(lambda) otherwise
    double lambda1;
    double psh_margin;   // lambda_n + delta lambda_1
    bool feasible;       // cone + dynamic-psh flags
    bool resorted;       // sample needed re-sorting after construction
    std::uint64_t sample_index;
};

MarginReport min_margin(const Spectrum& lambda_desc, const ConcavityParams& p);

struct SweepConfig {
    std::uint64_t samples = 10000;
    std::uint64_t seed = 42;
    double lambda1_min = 1e3;
    double lambda1_max = 1e6;
    double sigma_level = 1.0;  // target sigma_k(lambda), fixed by scaling the tail
    unsigned threads = 0;      // 0 = hardware default
};

struct SweepResult {
    std::vector<MarginReport> reports;
    double global_min;
    std::uint64_t violations;           // reports with min_margin < 0
    std::uint64_t attempts;
    std::map<std::string, std::uint64_t> rejects;  // reason -> count
};

/// Deterministic rejection sweep: lambda_1 log-uniform, tail scaled so
/// sigma_k(lambda) hits the target level, cone and dynamic-psh enforced.
/// The accepted set depends only on (config, params), not the thread count.
SweepResult concavity_sweep(const SweepConfig& cfg, const ConcavityParams& p);

struct ThresholdCell {
    double delta;
    double lambda1;
    double worst_margin;
    std::uint64_t violations;
    std::uint64_t samples;
};

/// Worst margin over a (delta, lambda_1) grid; observational, no assertions.
std::vector<ThresholdCell> threshold_scan(const std::vector<double>& deltas,
                                          const std::vector<double>& lambda1s,
                                          std::uint64_t samples_per_cell,
                                          std::uint64_t seed, double gamma,
                                          const HessianSumSpec& op);

/// Predicate sigma_{k;1} < -sigma_k / (16 k) on a normalized spectrum
/// (lambda_1 == 1, descending, in Gamma_k).
bool top_exclusion_dominates(const Spectrum& lambda_normalized, int k);

/// Ratio diagnostics reported (not asserted) in the regime above:
///   r1 = lambda_k / |lambda_n|
///   r2 = -sigma_{k+1} / (lambda_1..lambda_{k-1} lambda_k^2)
///   r3 = sigma_{k-1;1} / (lambda_2..lambda_{k-1} lambda_k^2)
/// ell is the last 1-based index with lambda_ell >= sqrt(delta).
struct RatioReport {
    double r1, r2, r3;
    bool r1_unbounded;
    int ell;
};
RatioReport regime_ratios(const Spectrum& lambda_normalized, int k, double delta);

} // namespace sumhess
