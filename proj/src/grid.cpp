#include "sumhess/solver/grid.hpp"

#include <cmath>
#include <numbers>

namespace sumhess::solver {

GridField::GridField(int N, double fill)
    : N_(N), data_(static_cast<std::size_t>(N) * N * N * N, fill) {
    if (N < 8 || N % 2 != 0)
        throw PreconditionError("GridField: N must be even and >= 8");
}

double GridField::h() const { return 2.0 * std::numbers::pi / N_; }

double GridField::coord(int i) const { return i * h(); }

std::array<int, 4> GridField::unflat(std::size_t f) const {
    std::array<int, 4> idx;
    idx[3] = static_cast<int>(f % N_); f /= N_;
    idx[2] = static_cast<int>(f % N_); f /= N_;
    idx[1] = static_cast<int>(f % N_); f /= N_;
    idx[0] = static_cast<int>(f);
    return idx;
}

double det_sum(const std::vector<double>& a) {
    constexpr std::size_t block = 4096;
    std::vector<double> partial;
    partial.reserve(a.size() / block + 1);
    for (std::size_t lo = 0; lo < a.size(); lo += block) {
        const std::size_t hi = std::min(a.size(), lo + block);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i];
        partial.push_back(s);
    }
    // pairwise over block sums
    while (partial.size() > 1) {
        std::size_t w = 0;
        for (std::size_t i = 0; i + 1 < partial.size(); i += 2)
            partial[w++] = partial[i] + partial[i + 1];
        if (partial.size() % 2) partial[w++] = partial.back();
        partial.resize(w);
    }
    return partial.empty() ? 0.0 : partial[0];
}

double det_dot(const std::vector<double>& a, const std::vector<double>& b) {
    constexpr std::size_t block = 4096;
    std::vector<double> partial;
    partial.reserve(a.size() / block + 1);
    for (std::size_t lo = 0; lo < a.size(); lo += block) {
        const std::size_t hi = std::min(a.size(), lo + block);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
        partial.push_back(s);
    }
    while (partial.size() > 1) {
        std::size_t w = 0;
        for (std::size_t i = 0; i + 1 < partial.size(); i += 2)
            partial[w++] = partial[i] + partial[i + 1];
        if (partial.size() % 2) partial[w++] = partial.back();
        partial.resize(w);
    }
    return partial.empty() ? 0.0 : partial[0];
}

double GridField::mean() const {
    return det_sum(data_) / static_cast<double>(data_.size());
}

double GridField::sup_norm() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

void GridField::subtract_mean() {
    const double m = mean();
    for (double& v : data_) v -= m;
}

Eig2 eig2(const Herm2& g) {
    const double mid = 0.5 * (g.a + g.d);
    const double half = 0.5 * (g.a - g.d);
    const double off = std::abs(g.b);
    const double r = std::hypot(half, off);

    Eig2 e;
    e.lam1 = mid + r;
    e.lam2 = mid - r;

    if (off <= 1e-300 || r <= 1e-300) {
        // (near-)diagonal: coordinate frame, larger entry first
        if (g.a >= g.d) {
            e.u11 = 1.0; e.u21 = 0.0; e.u12 = 0.0; e.u22 = 1.0;
        } else {
            e.u11 = 0.0; e.u21 = 1.0; e.u12 = 1.0; e.u22 = 0.0;
        }
        return e;
    }

    // eigenvector for lam1, picking the better-conditioned formula
    Complex v1, v2;
    if (half >= 0.0) {
        v1 = Complex(e.lam1 - g.d, 0.0);
        v2 = std::conj(g.b);
    } else {
        v1 = g.b;
        v2 = Complex(e.lam1 - g.a, 0.0);
    }
    const double nrm = std::sqrt(std::norm(v1) + std::norm(v2));
    v1 /= nrm; v2 /= nrm;
    e.u11 = v1; e.u21 = v2;
    e.u12 = -std::conj(v2); e.u22 = std::conj(v1);
    return e;
}

} // namespace sumhess::solver
