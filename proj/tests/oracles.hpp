#pragma once

// Test-only oracles, independent of the library's evaluation paths:
// subset-enumeration sigma_k and Richardson-extrapolated finite differences.

#include "sumhess/types.hpp"

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

using sumhess::Vec;
using sumhess::Mat;

/// sigma_k by explicit enumeration of all k-subsets.
inline double brute_sigma(const Vec& x, int k) {
    const int n = static_cast<int>(x.size());
    if (k == 0) return 1.0;
    if (k < 0 || k > n) return 0.0;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    double sum = 0.0;
    while (true) {
        double prod = 1.0;
        for (int i : idx) prod *= x[i];
        sum += prod;
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int i = pos + 1; i < k; ++i) idx[i] = idx[i - 1] + 1;
    }
    return sum;
}

/// Relative step h_i = base * max(1, |x_i|).
inline double step_for(double xi, double base = 1e-5) {
    return base * std::max(1.0, std::abs(xi));
}

/// Central difference with one Richardson level: (4 D(h/2) - D(h)) / 3.
inline double fd_partial(const std::function<double(const Vec&)>& f, Vec x, int i,
                         double base = 1e-5) {
    const double h = step_for(x[i], base);
    auto diff = [&](double hh) {
        const double xi = x[i];
        x[i] = xi + hh;
        const double fp = f(x);
        x[i] = xi - hh;
        const double fm = f(x);
        x[i] = xi;
        return (fp - fm) / (2.0 * hh);
    };
    const double d1 = diff(h);
    const double d2 = diff(0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

inline Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x,
                       double base = 1e-5) {
    Vec g(x.size());
    for (int i = 0; i < x.size(); ++i) g[i] = fd_partial(f, x, i, base);
    return g;
}

/// Second partials by centered differences, one Richardson level.
inline double fd_second(const std::function<double(const Vec&)>& f, Vec x, int i,
                        int j, double base = 1e-3) {
    auto eval2 = [&](double hi, double hj) {
        const double xi = x[i], xj = x[j];
        if (i == j) {
            x[i] = xi + hi;
            const double fp = f(x);
            x[i] = xi;
            const double f0 = f(x);
            x[i] = xi - hi;
            const double fm = f(x);
            x[i] = xi;
            return (fp - 2.0 * f0 + fm) / (hi * hi);
        }
        x[i] = xi + hi; x[j] = xj + hj;
        const double fpp = f(x);
        x[j] = xj - hj;
        const double fpm = f(x);
        x[i] = xi - hi;
        const double fmm = f(x);
        x[j] = xj + hj;
        const double fmp = f(x);
        x[i] = xi; x[j] = xj;
        return (fpp - fpm - fmp + fmm) / (4.0 * hi * hj);
    };
    const double hi = step_for(x[i], base);
    const double hj = step_for(x[j], base);
    const double d1 = eval2(hi, hj);
    const double d2 = eval2(0.5 * hi, 0.5 * hj);
    return (4.0 * d2 - d1) / 3.0;
}

inline Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& x,
                      double base = 1e-3) {
    const int n = static_cast<int>(x.size());
    Mat h(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) h(i, j) = h(j, i) = fd_second(f, x, i, j, base);
    return h;
}

/// Second derivative of a scalar path t -> f(t) at 0, one Richardson level.
inline double fd_path_second(const std::function<double(double)>& f, double h) {
    auto d = [&](double hh) {
        return (f(hh) - 2.0 * f(0.0) + f(-hh)) / (hh * hh);
    };
    return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

} // namespace oracle
