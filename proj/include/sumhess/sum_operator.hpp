#pragma once

#include "sumhess/types.hpp"

#include <utility>

namespace sumhess {

/// The operator F = sigma_k + sum_s b_s sigma_{k-s} on R^n, admitted only
/// when the auxiliary polynomial P(t) = t^m + sum_s (-1)^s b_s t^{m-s}
/// has m real roots y. F then equals sigma_k in dimension n+m evaluated at
/// the lifted spectrum (lambda, y).
class HessianSumSpec {
public:
    /// m = 0, plain sigma_k.
    static HessianSumSpec pure(int n, int k);
    /// Roots solved from b via companion-matrix eigenvalues; throws
    /// NotRealRooted if any root has |Im| > 1e-9 (1 + |root|).
    static HessianSumSpec from_coefficients(int n, int k, Vec b);
    /// b reconstructed from given real roots.
    static HessianSumSpec from_roots(int n, int k, Vec y);

    int n() const { return n_; }
    int k() const { return k_; }
    int m() const { return static_cast<int>(b_.size()); }
    const Vec& b() const { return b_; }
    const Vec& y() const { return y_; }

    /// (lambda_1..lambda_n, y_1..y_m)
    Vec lifted(const Spectrum& lambda) const;

private:
    HessianSumSpec(int n, int k, Vec b, Vec y);
    int n_, k_;
    Vec b_, y_;  // y sorted descending
};

/// Roots of t^m + sum_s (-1)^s b_s t^{m-s}, sorted descending.
/// Throws NotRealRooted when a root fails the realness tolerance.
Vec polynomial_real_roots(const Vec& b);

/// F(lambda), evaluated directly and cross-checked against the lift.
double F_value(const Spectrum& lambda, const HessianSumSpec& op);

/// F_i(lambda) = sigma_{k-1} of the lifted spectrum with slot i removed.
Vec F_grad(const Spectrum& lambda, const HessianSumSpec& op);

/// F_ij(lambda) = sigma_{k-2} of the lift with slots i, j removed (i != j);
/// zero diagonal.
Mat F_hess(const Spectrum& lambda, const HessianSumSpec& op);

/// (lambda, y) in Gamma_k^{n+m} and all y_i >= 0.
bool admissible_condition1(const Spectrum& lambda, const HessianSumSpec& op);

/// lambda in Gamma_{k-1}^n and all b_i >= 0. When this holds together with
/// F(lambda) > 0, lifted membership in Gamma_k^{n+m} follows and is asserted.
bool admissible_condition2(const Spectrum& lambda, const HessianSumSpec& op);

/// Second derivative of t |-> F(eigenvalues(diag(lambda) + t eta)) at t = 0
/// for Hermitian eta:
///   sum_ij F_ij eta_ii eta_jj + sum_{p != q} R_pq |eta_pq|^2,
/// where the divided difference R_pq = (F_p - F_q)/(lambda_p - lambda_q) is
/// evaluated in closed form as -sigma_{k-2;pq} of the lift, which stays well
/// defined at coincident eigenvalues.
double contraction_second_derivative(const Spectrum& lambda,
                                     const HessianSumSpec& op, const CMat& eta);

/// Eigenvalues (descending) and a unitary diagonalizing frame of a Hermitian
/// matrix. Throws NonHermitianInput beyond a 1e-12 relative tolerance.
std::pair<Spectrum, CMat> hermitian_eigs_desc(const CMat& g);

/// ||g - g*||_F <= 1e-12 ||g||_F
bool is_hermitian(const CMat& g);

} // namespace sumhess
