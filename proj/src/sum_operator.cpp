#include "sumhess/sum_operator.hpp"

#include "sumhess/cones.hpp"
#include "sumhess/symfun.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sumhess {

Vec polynomial_real_roots(const Vec& b) {
    const int m = static_cast<int>(b.size());
    if (m < 1) throw PreconditionError("polynomial_real_roots: need m >= 1");
    if (m == 1) {
        Vec y(1);
        y[0] = b[0];  // P(t) = t - b_1
        return y;
    }
    // monic coefficients c_j of t^j: c_{m-s} = (-1)^s b_s
    Mat companion = Mat::Zero(m, m);
    for (int s = 1; s <= m; ++s) {
        const double c = (s % 2 == 0 ? 1.0 : -1.0) * b[s - 1];
        companion(0, s - 1) = -c;
    }
    for (int i = 1; i < m; ++i) companion(i, i - 1) = 1.0;

    Eigen::EigenSolver<Mat> es(companion, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw NotRealRooted("polynomial_real_roots: eigensolver failed");
    Vec y(m);
    for (int i = 0; i < m; ++i) {
        const Complex r = es.eigenvalues()[i];
        if (std::abs(r.imag()) > 1e-9 * (1.0 + std::abs(r))) {
            std::ostringstream msg;
            msg << "polynomial is not real-rooted: root " << r.real() << " + "
                << r.imag() << "i";
            throw NotRealRooted(msg.str());
        }
        y[i] = r.real();
    }
    std::sort(y.begin(), y.end(), std::greater<double>());
    return y;
}

HessianSumSpec::HessianSumSpec(int n, int k, Vec b, Vec y)
    : n_(n), k_(k), b_(std::move(b)), y_(std::move(y)) {
    const int m = static_cast<int>(b_.size());
    if (n_ < 2) throw PreconditionError("HessianSumSpec: need n >= 2");
    if (k_ < 1 || k_ > n_) throw PreconditionError("HessianSumSpec: need 1 <= k <= n");
    if (m >= k_) throw PreconditionError("HessianSumSpec: need m < k");
    if (y_.size() != m) throw PreconditionError("HessianSumSpec: |y| != m");
    // Vieta consistency: sigma_s(y) == b_s
    if (m > 0) {
        const Vec sy = sigma_table_raw(y_, m);
        for (int s = 1; s <= m; ++s) {
            const double scale = std::max(1.0, std::abs(b_[s - 1]));
            if (std::abs(sy[s] - b_[s - 1]) > 1e-9 * scale)
                throw PreconditionError("HessianSumSpec: roots do not reproduce b");
        }
    }
}

HessianSumSpec HessianSumSpec::pure(int n, int k) {
    return HessianSumSpec(n, k, Vec(0), Vec(0));
}

HessianSumSpec HessianSumSpec::from_coefficients(int n, int k, Vec b) {
    Vec y = b.size() ? polynomial_real_roots(b) : Vec(0);
    return HessianSumSpec(n, k, std::move(b), std::move(y));
}

HessianSumSpec HessianSumSpec::from_roots(int n, int k, Vec y) {
    std::sort(y.begin(), y.end(), std::greater<double>());
    const int m = static_cast<int>(y.size());
    Vec b(m);
    if (m > 0) {
        const Vec sy = sigma_table_raw(y, m);
        for (int s = 1; s <= m; ++s) b[s - 1] = sy[s];
    }
    return HessianSumSpec(n, k, std::move(b), std::move(y));
}

Vec HessianSumSpec::lifted(const Spectrum& lambda) const {
    if (lambda.n() != n_)
        throw PreconditionError("HessianSumSpec: spectrum dimension mismatch");
    Vec hat(n_ + m());
    hat.head(n_) = lambda.values();
    hat.tail(m()) = y_;
    return hat;
}

double F_value(const Spectrum& lambda, const HessianSumSpec& op) {
    const int k = op.k();
    const Vec table = sigma_table_raw(lambda.values(), k);
    double direct = table[k];
    for (int s = 1; s <= op.m(); ++s) direct += op.b()[s - 1] * table[k - s];
    if (op.m() == 0) return direct;

    const double lift = sigma_table_raw(op.lifted(lambda), k)[k];
    if (std::abs(direct - lift) > 1e-10 * (1.0 + std::abs(lift)))
        throw std::logic_error("F_value: direct sum and lift disagree");
    return direct;
}

Vec F_grad(const Spectrum& lambda, const HessianSumSpec& op) {
    const Vec hat = op.lifted(lambda);
    Vec g(op.n());
    for (int i = 0; i < op.n(); ++i) {
        const int idx[1] = {i};
        g[i] = sigma_excluding_raw(hat, op.k() - 1, idx);
    }
    return g;
}

Mat F_hess(const Spectrum& lambda, const HessianSumSpec& op) {
    const Vec hat = op.lifted(lambda);
    const int n = op.n();
    Mat h = Mat::Zero(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            const int idx[2] = {p, q};
            h(p, q) = h(q, p) = sigma_excluding_raw(hat, op.k() - 2, idx);
        }
    return h;
}

bool admissible_condition1(const Spectrum& lambda, const HessianSumSpec& op) {
    if (op.m() > 0 && op.y().minCoeff() < 0.0) return false;
    const Vec hat = op.lifted(lambda);
    const Vec table = sigma_table_raw(hat, op.k());
    for (int j = 1; j <= op.k(); ++j)
        if (!(table[j] > 0.0)) return false;
    return true;
}

bool admissible_condition2(const Spectrum& lambda, const HessianSumSpec& op) {
    if (op.m() > 0 && op.b().minCoeff() < 0.0) return false;
    const Vec table = sigma_table_raw(lambda.values(), op.k() - 1);
    for (int j = 1; j <= op.k() - 1; ++j)
        if (!(table[j] > 0.0)) return false;

    // together with F > 0 this forces lifted membership; keep as a hard check
    if (F_value(lambda, op) > 0.0) {
        const Vec lift_table = sigma_table_raw(op.lifted(lambda), op.k());
        for (int j = 1; j <= op.k(); ++j)
            if (!(lift_table[j] > 0.0))
                throw std::logic_error("admissible_condition2: implication violated");
    }
    return true;
}

bool is_hermitian(const CMat& g) {
    const double scale = g.norm();
    return (g - g.adjoint()).norm() <= 1e-12 * std::max(scale, 1e-300);
}

std::pair<Spectrum, CMat> hermitian_eigs_desc(const CMat& g) {
    if (g.rows() != g.cols())
        throw NonHermitianInput("hermitian_eigs_desc: matrix not square");
    if (!is_hermitian(g))
        throw NonHermitianInput("hermitian_eigs_desc: matrix not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> es(g);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_eigs_desc: eigensolver failed");
    const int n = static_cast<int>(g.rows());
    Vec vals(n);
    CMat frame(n, n);
    for (int i = 0; i < n; ++i) {
        vals[i] = es.eigenvalues()[n - 1 - i];
        frame.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    return {Spectrum(std::move(vals), true), std::move(frame)};
}

double contraction_second_derivative(const Spectrum& lambda,
                                     const HessianSumSpec& op, const CMat& eta) {
    if (eta.rows() != op.n() || eta.cols() != op.n())
        throw PreconditionError("contraction: eta dimension mismatch");
    if (!is_hermitian(eta))
        throw NonHermitianInput("contraction: eta not Hermitian");

    const Vec hat = op.lifted(lambda);
    const int n = op.n();
    double total = 0.0;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            if (p == q) continue;
            const int idx[2] = {p, q};
            const double spq = sigma_excluding_raw(hat, op.k() - 2, idx);
            // diagonal-diagonal block (F_pq = spq) and the divided-difference
            // block (R_pq = -spq), each summed over ordered pairs
            total += spq * eta(p, p).real() * eta(q, q).real();
            total -= spq * std::norm(eta(p, q));
        }
    return total;
}

} // namespace sumhess
