#pragma once

#include "sumhess/types.hpp"

#include <array>
#include <cstddef>
#include <vector>

namespace sumhess::solver {

/// Real scalar field on the periodic grid [0,2pi)^4 with N points per axis.
/// Axes are (x1, y1, x2, y2) with z_j = x_j + i y_j; flat index
/// ((i0 N + i1) N + i2) N + i3.
class GridField {
public:
    explicit GridField(int N, double fill = 0.0);

    int N() const { return N_; }
    std::size_t size() const { return data_.size(); }
    double h() const;  // grid spacing 2pi/N

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    std::size_t flat(int i0, int i1, int i2, int i3) const {
        return ((static_cast<std::size_t>(i0) * N_ + i1) * N_ + i2) * N_ + i3;
    }
    std::array<int, 4> unflat(std::size_t f) const;

    double& at(int i0, int i1, int i2, int i3) { return data_[flat(i0, i1, i2, i3)]; }
    double at(int i0, int i1, int i2, int i3) const { return data_[flat(i0, i1, i2, i3)]; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    /// Deterministic blocked-pairwise mean.
    double mean() const;
    double sup_norm() const;

    void subtract_mean();

    /// Coordinate of grid index along one axis, in [0, 2pi).
    double coord(int i) const;

private:
    int N_;
    std::vector<double> data_;
};

/// Pointwise 2x2 Hermitian matrix [[a, b], [conj(b), d]].
struct Herm2 {
    double a = 0.0, d = 0.0;
    Complex b{0.0, 0.0};
};

/// Eigen-decomposition of a Herm2: lam1 >= lam2 with unit eigenvector columns
/// (u11,u21) and (u12,u22).
struct Eig2 {
    double lam1, lam2;
    Complex u11, u21, u12, u22;
};

Eig2 eig2(const Herm2& g);

class HermitianField {
public:
    explicit HermitianField(int N) : N_(N), data_(static_cast<std::size_t>(N) * N * N * N) {}
    int N() const { return N_; }
    std::size_t size() const { return data_.size(); }
    Herm2& operator[](std::size_t i) { return data_[i]; }
    const Herm2& operator[](std::size_t i) const { return data_[i]; }

private:
    int N_;
    std::vector<Herm2> data_;
};

/// Deterministic dot product and sum (blocked, fixed order).
double det_dot(const std::vector<double>& a, const std::vector<double>& b);
double det_sum(const std::vector<double>& a);

} // namespace sumhess::solver
