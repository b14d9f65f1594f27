#include "sumhess/symfun.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

namespace sumhess {

namespace {

// two-sum: s = fl(a+b), err = exact remainder
inline void two_sum(double a, double b, double& s, double& err) {
    s = a + b;
    const double bv = s - a;
    err = (a - (s - bv)) + (b - bv);
}

inline double rel_scale(std::initializer_list<double> terms) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, std::abs(t));
    return std::max(m, DBL_MIN);
}

} // namespace

Vec sigma_table_raw(const Vec& x, int K) {
    Vec e = Vec::Zero(K + 1);
    Vec c = Vec::Zero(K + 1);
    e[0] = 1.0;
    const int n = static_cast<int>(x.size());
    for (int i = 0; i < n; ++i) {
        const double xi = x[i];
        for (int j = std::min(i + 1, K); j >= 1; --j) {
            double p = xi * e[j - 1];
            const double perr = std::fma(xi, e[j - 1], -p) + xi * c[j - 1];
            double s, err;
            two_sum(e[j], p, s, err);
            e[j] = s;
            c[j] += err + perr;
        }
    }
    for (int j = 1; j <= K; ++j) e[j] += c[j];
    return e;
}

SymTable elementary_all(const Spectrum& x, int K) {
    if (K < 0) throw PreconditionError("elementary_all: K must be >= 0");
    return SymTable{sigma_table_raw(x.values(), K)};
}

double sigma_excluding_raw(const Vec& x, int k, std::span<const int> excluded) {
    if (k < 0) return 0.0;
    Vec reduced(x.size());
    int m = 0;
    for (int i = 0; i < x.size(); ++i) {
        bool skip = false;
        for (int e : excluded)
            if (e == i) { skip = true; break; }
        if (!skip) reduced[m++] = x[i];
    }
    if (k > m) return 0.0;
    if (k == 0) return 1.0;
    return sigma_table_raw(reduced.head(m), k)[k];
}

double sigma_excluding(const Spectrum& x, int k, std::span<const int> excluded) {
    for (int e : excluded)
        if (e < 0 || e >= x.n())
            throw PreconditionError("sigma_excluding: index out of range");
    return sigma_excluding_raw(x.values(), k, excluded);
}

Vec grad_sigma(const Spectrum& x, int k) {
    if (k < 1 || k > x.n())
        throw PreconditionError("grad_sigma: need 1 <= k <= n");
    Vec g(x.n());
    for (int i = 0; i < x.n(); ++i) {
        const int idx[1] = {i};
        g[i] = sigma_excluding_raw(x.values(), k - 1, idx);
    }
    return g;
}

Mat hess_sigma(const Spectrum& x, int k) {
    if (k < 2 || k > x.n())
        throw PreconditionError("hess_sigma: need 2 <= k <= n");
    const int n = x.n();
    Mat h = Mat::Zero(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            const int idx[2] = {p, q};
            h(p, q) = h(q, p) = sigma_excluding_raw(x.values(), k - 2, idx);
        }
    return h;
}

std::pair<Spectrum, std::vector<int>> rearrange_desc(const Spectrum& x) {
    std::vector<int> perm(x.n());
    std::iota(perm.begin(), perm.end(), 0);
    std::stable_sort(perm.begin(), perm.end(),
                     [&](int a, int b) { return x[a] > x[b]; });
    Vec sorted(x.n());
    for (int i = 0; i < x.n(); ++i) sorted[i] = x[perm[i]];
    return {Spectrum(std::move(sorted), true), std::move(perm)};
}

IdentityReport check_identities(const Spectrum& x, int k) {
    const int n = x.n();
    if (k < 1 || k > n)
        throw PreconditionError("check_identities: need 1 <= k <= n");

    const Vec table = sigma_table_raw(x.values(), std::min(k + 1, n));
    const double s1 = table[1];
    const double sk = table[k];
    const double skp1 = (k + 1 <= n) ? table[k + 1] : 0.0;

    IdentityReport rep;
    rep.per_slot_abs.resize(n);
    rep.per_slot_rel.resize(n);

    double sum_excl = 0.0, sum_grad = 0.0, sum_grad_sq = 0.0;
    double scale_excl = 0.0, scale_grad = 0.0, scale_grad_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const int idx[1] = {i};
        const double ski = sigma_excluding_raw(x.values(), k, idx);
        const double skm1i = sigma_excluding_raw(x.values(), k - 1, idx);
        const double r = sk - ski - x[i] * skm1i;
        rep.per_slot_abs[i] = std::abs(r);
        rep.per_slot_rel[i] =
            std::abs(r) / rel_scale({sk, ski, x[i] * skm1i});
        sum_excl += ski;
        sum_grad += skm1i * x[i];
        sum_grad_sq += skm1i * x[i] * x[i];
        scale_excl = std::max(scale_excl, std::abs(ski));
        scale_grad = std::max(scale_grad, std::abs(skm1i * x[i]));
        scale_grad_sq = std::max(scale_grad_sq, std::abs(skm1i * x[i] * x[i]));
    }

    rep.sum_excl_abs = std::abs(sum_excl - (n - k) * sk);
    rep.sum_excl_rel = rep.sum_excl_abs /
        std::max({scale_excl * n, std::abs((n - k) * sk), DBL_MIN});

    rep.sum_grad_abs = std::abs(sum_grad - k * sk);
    rep.sum_grad_rel = rep.sum_grad_abs /
        std::max({scale_grad * n, std::abs(k * sk), DBL_MIN});

    const double rhs3 = s1 * sk - (k + 1) * skp1;
    rep.sum_grad_sq_abs = std::abs(sum_grad_sq - rhs3);
    rep.sum_grad_sq_rel = rep.sum_grad_sq_abs /
        std::max({scale_grad_sq * n, std::abs(s1 * sk),
                  std::abs((k + 1) * skp1), DBL_MIN});

    rep.worst_rel = std::max({rep.per_slot_rel.maxCoeff(), rep.sum_excl_rel,
                              rep.sum_grad_rel, rep.sum_grad_sq_rel});
    return rep;
}

} // namespace sumhess
