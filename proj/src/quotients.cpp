#include "sumhess/quotients.hpp"

#include "sumhess/cones.hpp"
#include "sumhess/symfun.hpp"

#include <cmath>

namespace sumhess {

namespace {

double quotient_raw(const Vec& x, int k) {
    const Vec table = sigma_table_raw(x, k);
    const double denom = (k - 1 <= x.size()) ? table[k - 1] : 0.0;
    if (std::abs(denom) <= 1e-300)
        throw DegenerateDenominator("newton_quotient: sigma_{k-1} degenerate");
    return table[k] / denom;
}

void require_gamma(const Spectrum& x, int k, const char* who) {
    if (!in_gamma_k(x, k).inside)
        throw ConeViolation(std::string(who) + ": x not in Gamma_k");
}

} // namespace

double newton_quotient(const Spectrum& x, int k) {
    if (k < 1 || k > x.n())
        throw PreconditionError("newton_quotient: need 1 <= k <= n");
    return quotient_raw(x.values(), k);
}

double newton_quotient_excluding(const Spectrum& x, int k,
                                 std::span<const int> excluded) {
    Vec reduced(x.n());
    int m = 0;
    for (int i = 0; i < x.n(); ++i) {
        bool skip = false;
        for (int e : excluded)
            if (e == i) { skip = true; break; }
        if (!skip) reduced[m++] = x[i];
    }
    if (k > m)
        throw PreconditionError("newton_quotient_excluding: k exceeds reduced length");
    return quotient_raw(reduced.head(m), k);
}

Mat quotient_hessian_raw(const Vec& x, int k) {
    const int n = static_cast<int>(x.size());
    if (k <= 1) return Mat::Zero(n, n);  // q_1 = sigma_1 is linear

    const Vec table = sigma_table_raw(x, k);
    const double N = table[k];
    const double D = table[k - 1];
    if (std::abs(D) <= 1e-300)
        throw DegenerateDenominator("quotient_hessian: sigma_{k-1} degenerate");

    Vec Ni(n), Di(n);
    for (int i = 0; i < n; ++i) {
        const int idx[1] = {i};
        Ni[i] = sigma_excluding_raw(x, k - 1, idx);
        Di[i] = sigma_excluding_raw(x, k - 2, idx);
    }

    // q = N/D with N = sigma_k, D = sigma_{k-1}:
    //   H_ij = [N_ij D^2 - N_i D_j D - N_j D_i D - N D_ij D + 2 N D_i D_j] / D^3
    Mat H(n, n);
    const double D3 = D * D * D;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double Nij = 0.0, Dij = 0.0;
            if (i != j) {
                const int idx[2] = {i, j};
                Nij = sigma_excluding_raw(x, k - 2, idx);
                Dij = sigma_excluding_raw(x, k - 3, idx);
            }
            const double num = Nij * D * D - Ni[i] * Di[j] * D -
                               Ni[j] * Di[i] * D - N * Dij * D +
                               2.0 * N * Di[i] * Di[j];
            H(i, j) = H(j, i) = num / D3;
        }
    return H;
}

Mat quotient_hessian(const Spectrum& x, int k) {
    if (k < 1 || k > x.n())
        throw PreconditionError("quotient_hessian: need 1 <= k <= n");
    require_gamma(x, k, "quotient_hessian");
    return quotient_hessian_raw(x.values(), k);
}

namespace {

double hermitian_form(const Mat& H, const CVec& xi) {
    // H real symmetric, so xi^* H xi is real; accumulate the real part only
    double total = 0.0;
    const int n = static_cast<int>(H.rows());
    for (int i = 0; i < n; ++i) {
        total += H(i, i) * std::norm(xi[i]);
        for (int j = i + 1; j < n; ++j)
            total += 2.0 * H(i, j) * (std::conj(xi[i]) * xi[j]).real();
    }
    return total;
}

} // namespace

double quotient_hessian_form(const Spectrum& x, int k, const CVec& xi) {
    if (xi.size() != x.n())
        throw PreconditionError("quotient_hessian_form: direction length mismatch");
    return hermitian_form(quotient_hessian(x, k), xi);
}

double q2_identity_residual(const Spectrum& x, const CVec& xi) {
    const double s1 = sigma_table_raw(x.values(), 1)[1];
    if (!(s1 > 0.0))
        throw PreconditionError("q2_identity_residual: sigma_1 must be positive");
    const double lhs = -hermitian_form(quotient_hessian_raw(x.values(), 2), xi);
    const Complex s1xi = xi.sum();
    double rhs = 0.0;
    for (int i = 0; i < x.n(); ++i)
        rhs += std::norm(xi[i] - (x[i] / s1) * s1xi);
    rhs /= s1;
    return std::abs(lhs - rhs);
}

double quotient_recursion_margin(const Spectrum& x, int k, const CVec& xi) {
    const int n = x.n();
    if (k < 1 || k + 1 > n)
        throw PreconditionError("quotient_recursion_margin: need 1 <= k < n");
    require_gamma(x, k + 1, "quotient_recursion_margin");

    const double lhs = hermitian_form(quotient_hessian_raw(x.values(), k + 1), xi);

    double rhs = 0.0;
    Vec xred(n - 1);
    CVec xired(n - 1);
    for (int i = 0; i < n; ++i) {
        int m = 0;
        for (int j = 0; j < n; ++j)
            if (j != i) { xred[m] = x[j]; xired[m] = xi[j]; ++m; }
        const int idx[1] = {i};
        const double ski = sigma_excluding_raw(x.values(), k, idx);
        const double skm1i = sigma_excluding_raw(x.values(), k - 1, idx);
        if (std::abs(skm1i) <= 1e-300)
            throw DegenerateDenominator("quotient_recursion_margin: s_{k-1;i}");
        const double qki = ski / skm1i;
        const double denom = (k + 1) * (qki + x[i]) * (qki + x[i]);
        rhs += x[i] * x[i] * hermitian_form(quotient_hessian_raw(xred, k), xired) /
               denom;
    }
    return rhs - lhs;
}

namespace {

// squared norm of the component of xi (with `zeroed` slots set to 0)
// orthogonal to the correspondingly zeroed x
double perp_norm_sq(const Vec& x, const CVec& xi, std::span<const int> zeroed) {
    const int n = static_cast<int>(x.size());
    Vec xz = x;
    CVec xiz = xi;
    for (int i : zeroed) { xz[i] = 0.0; xiz[i] = Complex(0.0, 0.0); }
    const double nx2 = xz.squaredNorm();
    if (nx2 <= 1e-300) return xiz.squaredNorm();
    Complex c(0.0, 0.0);
    for (int i = 0; i < n; ++i) c += xz[i] * xiz[i];
    c /= nx2;
    double out = 0.0;
    for (int i = 0; i < n; ++i) out += std::norm(xiz[i] - c * xz[i]);
    return out;
}

} // namespace

double chain_bound_margin(const Spectrum& x_desc, int k, const CVec& xi, double C) {
    if (!x_desc.sorted_desc())
        throw PreconditionError("chain_bound_margin: spectrum must be sorted descending");
    if (k < 3 || k > x_desc.n())
        throw PreconditionError("chain_bound_margin: need 3 <= k <= n");
    require_gamma(x_desc, k, "chain_bound_margin");

    const double skm1 = sigma_table_raw(x_desc.values(), k - 1)[k - 1];
    const double lhs = -skm1 * hermitian_form(
        quotient_hessian_raw(x_desc.values(), k), xi);

    double rhs = 0.0;
    std::vector<int> zeroed;
    for (int j = 0; j < k - 1; ++j) {
        zeroed.clear();
        double prod = 1.0;
        for (int t = 0; t < k - 1; ++t)
            if (t != j) { zeroed.push_back(t); prod *= x_desc[t]; }
        rhs += prod * perp_norm_sq(x_desc.values(), xi, zeroed);
    }
    return lhs - C * rhs;
}

CVec project_tail(const Spectrum& x_desc, int k, CVec zeta) {
    const int n = x_desc.n();
    if (zeta.size() != n)
        throw PreconditionError("project_tail: direction length mismatch");
    zeta[0] = Complex(0.0, 0.0);
    // tail slots are k-1 .. n-1 (0-based)
    double nx2 = 0.0;
    for (int p = k - 1; p < n; ++p) nx2 += x_desc[p] * x_desc[p];
    if (nx2 <= 1e-300) return zeta;  // degenerate tail: skip projection
    Complex c(0.0, 0.0);
    for (int p = k - 1; p < n; ++p) c += x_desc[p] * zeta[p];
    c /= nx2;
    for (int p = k - 1; p < n; ++p) zeta[p] -= c * x_desc[p];
    return zeta;
}

double tail_projected_margin(const Spectrum& x_desc, int k, const CVec& zeta_raw,
                             double C) {
    if (!x_desc.sorted_desc())
        throw PreconditionError("tail_projected_margin: spectrum must be sorted descending");
    const int n = x_desc.n();
    if (k < 2 || k > n)
        throw PreconditionError("tail_projected_margin: need 2 <= k <= n");
    require_gamma(x_desc, k, "tail_projected_margin");

    const CVec zeta = project_tail(x_desc, k, zeta_raw);

    const double skm1 = sigma_table_raw(x_desc.values(), k - 1)[k - 1];
    const double lhs = -skm1 * hermitian_form(
        quotient_hessian_raw(x_desc.values(), k), zeta);

    double head = 0.0;
    for (int j = 1; j < k - 1; ++j)  // slots 2..k-1 (1-based)
        head += std::norm(zeta[j]) / (x_desc[j] * x_desc[j] * x_desc[j]);
    double prod_k = 1.0;
    for (int t = 0; t < k - 1; ++t) prod_k *= x_desc[t];
    prod_k *= x_desc[k - 1] * x_desc[k - 1];

    double tail = 0.0;
    for (int p = k - 1; p < n; ++p) tail += std::norm(zeta[p]);
    double prod_km2 = 1.0;
    for (int t = 0; t < k - 2; ++t) prod_km2 *= x_desc[t];

    return lhs - C * (prod_k * head + prod_km2 * tail);
}

} // namespace sumhess
