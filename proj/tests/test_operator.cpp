#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sweeps.hpp"
#include "sumhess/sum_operator.hpp"
#include "sumhess/symfun.hpp"

#include <cmath>

using namespace sumhess;

namespace {

Vec make(std::initializer_list<double> v) {
    Vec x(static_cast<int>(v.size()));
    int i = 0;
    for (double t : v) x[i++] = t;
    return x;
}

CMat random_hermitian(SplitMix64& rng, int n, double min_gap = 0.0) {
    CMat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = Complex(rng.normal(), rng.normal());
    CMat h = 0.5 * (a + a.adjoint());
    if (min_gap > 0.0) {
        // spread the spectrum so divided differences are well separated
        Eigen::SelfAdjointEigenSolver<CMat> es(h);
        Vec vals = es.eigenvalues();
        for (int i = 0; i < n; ++i) vals[i] += 1.5 * min_gap * i;
        h = es.eigenvectors() * vals.asDiagonal() * es.eigenvectors().adjoint();
        h = 0.5 * (h + h.adjoint());
    }
    return h;
}

} // namespace

TEST_CASE("polynomial roots") {
    Vec y = polynomial_real_roots(make({1}));
    CHECK(y[0] == 1.0);

    y = polynomial_real_roots(make({2, 1}));  // (t-1)^2
    CHECK(y[0] == doctest::Approx(1.0));
    CHECK(y[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(polynomial_real_roots(make({0, 1})), NotRealRooted);  // t^2+1

    // descending order and Vieta round trip
    y = polynomial_real_roots(make({1.5, -1.0}));  // t^2 - 1.5t - 1
    CHECK(y[0] > y[1]);
    CHECK(y[0] + y[1] == doctest::Approx(1.5));
    CHECK(y[0] * y[1] == doctest::Approx(-1.0));
}

TEST_CASE("spec construction and validation") {
    const auto op = HessianSumSpec::from_coefficients(3, 2, make({1}));
    CHECK(op.m() == 1);
    CHECK(op.y()[0] == doctest::Approx(1.0));

    const auto pure = HessianSumSpec::pure(4, 3);
    CHECK(pure.m() == 0);

    CHECK_THROWS_AS(HessianSumSpec::from_coefficients(3, 2, make({0, 1})),
                    NotRealRooted);
    // m must stay below k
    CHECK_THROWS_AS(HessianSumSpec::from_coefficients(3, 2, make({2, 1})),
                    PreconditionError);

    const auto roots = HessianSumSpec::from_roots(4, 3, make({2, -1}));
    CHECK(roots.b()[0] == doctest::Approx(1.0));   // sigma_1(2,-1)
    CHECK(roots.b()[1] == doctest::Approx(-2.0));  // sigma_2(2,-1)
}

TEST_CASE("F value on reference inputs") {
    const auto op = HessianSumSpec::from_coefficients(3, 2, make({1}));
    CHECK(F_value(Spectrum(make({1, 1, 1})), op) == doctest::Approx(6.0));

    const auto pure = HessianSumSpec::pure(3, 2);
    CHECK(F_value(Spectrum(make({1, 2, 3})), pure) == doctest::Approx(11.0));

    CHECK(F_value(Spectrum(make({0, 0, 0})), op) == doctest::Approx(0.0));
}

TEST_CASE("lift identity over random real-rooted operators") {
    SplitMix64 rng(31);
    for (int t = 0; t < 2000; ++t) {
        const int n = 3 + static_cast<int>(rng.below(4));  // 3..6
        const int m = 1 + static_cast<int>(rng.below(3));
        if (m + 1 > n) continue;
        const int k = m + 1 + static_cast<int>(rng.below(n - m));
        Vec y(m);
        for (int i = 0; i < m; ++i) y[i] = rng.uniform(-2.0, 3.0);
        const auto op = HessianSumSpec::from_roots(n, k, y);
        Vec lam(n);
        for (int i = 0; i < n; ++i) lam[i] = rng.uniform(-3.0, 5.0);
        const Spectrum spec(lam);

        const Vec lam_table = sigma_table_raw(lam, k);
        const Vec hat_table = sigma_table_raw(op.lifted(spec), k);
        for (int l = 1; l <= k; ++l) {
            double direct = lam_table[l];
            for (int s = 1; s <= std::min(op.m(), l); ++s)
                direct += op.b()[s - 1] * lam_table[l - s];
            CHECK(std::abs(hat_table[l] - direct) <=
                  1e-10 * (1.0 + std::abs(hat_table[l])));
        }
    }
}

TEST_CASE("F gradient and Hessian") {
    const auto op = HessianSumSpec::from_coefficients(3, 2, make({1}));
    const Vec g = F_grad(Spectrum(make({1, 1, 1})), op);
    for (int i = 0; i < 3; ++i) CHECK(g[i] == doctest::Approx(3.0));

    // m = 0 reduces to the plain sigma derivatives
    const auto pure = HessianSumSpec::pure(4, 3);
    const Spectrum x(make({2, 1, 0.5, -0.2}));
    CHECK((F_grad(x, pure) - grad_sigma(x, 3)).norm() == 0.0);
    CHECK((F_hess(x, pure) - hess_sigma(x, 3)).norm() == 0.0);

    // finite differences of F_value
    SplitMix64 rng(32);
    for (int t = 0; t < 60; ++t) {
        const int n = 3 + static_cast<int>(rng.below(3));
        const int m = 1;
        const int k = 2 + static_cast<int>(rng.below(n - 1));
        const auto sp = HessianSumSpec::from_roots(n, k, make({1.3}));
        Vec lam(n);
        for (int i = 0; i < n; ++i) lam[i] = rng.uniform(-2.0, 4.0);
        const Vec grad = F_grad(Spectrum(lam), sp);
        const Vec fd = oracle::fd_gradient(
            [&](const Vec& v) { return F_value(Spectrum(v), sp); }, lam);
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(grad[i] - fd[i]) <= 1e-7 * std::max(1.0, std::abs(grad[i])));
        (void)m;
    }
}

TEST_CASE("divided-difference identity") {
    SplitMix64 rng(33);
    for (int t = 0; t < 500; ++t) {
        const int n = 3 + static_cast<int>(rng.below(4));
        const int k = 2 + static_cast<int>(rng.below(n - 1));
        const auto op = (t % 2) ? HessianSumSpec::pure(n, k)
                                : HessianSumSpec::from_roots(n, k, make({0.7}));
        Vec lam(n);
        for (int i = 0; i < n; ++i) lam[i] = rng.uniform(-3.0, 5.0);
        const Spectrum spec(lam);
        const Vec g = F_grad(spec, op);
        const Mat h = F_hess(spec, op);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) {
                if (p == q) continue;
                const double resid = (g[p] - g[q]) + (lam[p] - lam[q]) * h(p, q);
                const double scale = std::max({1.0, std::abs(g[p]), std::abs(g[q])});
                CHECK(std::abs(resid) <= 1e-12 * scale);
            }
    }
}

TEST_CASE("ellipticity on the admissible set") {
    const auto op = HessianSumSpec::from_roots(4, 3, make({0.5}));
    std::uint64_t found = 0;
    for (std::uint64_t idx = 0; found < 3000; ++idx) {
        auto lam = sweeps::cone_sample(4, 3, 42, idx);
        if (!lam) continue;
        if (!admissible_condition1(*lam, op)) continue;
        ++found;
        const Vec g = F_grad(*lam, op);
        for (int i = 0; i < 4; ++i) CHECK(g[i] > -1e-12);
    }
}

TEST_CASE("admissibility conditions") {
    const auto op = HessianSumSpec::from_coefficients(3, 2, make({1}));
    const Spectrum ones(make({1, 1, 1}));
    CHECK(admissible_condition1(ones, op));
    CHECK(admissible_condition2(ones, op));

    const auto neg_root = HessianSumSpec::from_roots(3, 2, make({-1.0}));
    CHECK_FALSE(admissible_condition1(ones, neg_root));  // y < 0

    // m = 0: condition 1 reduces to plain cone membership
    const auto pure = HessianSumSpec::pure(3, 2);
    CHECK(admissible_condition1(ones, pure));
    CHECK_FALSE(admissible_condition1(Spectrum(make({3, 1, -1})), pure));
}

TEST_CASE("hermitian eigensolve, descending with frame") {
    auto [vals, frame] = hermitian_eigs_desc(CMat::Identity(3, 3));
    for (int i = 0; i < 3; ++i) CHECK(vals[i] == doctest::Approx(1.0));

    CMat d = CMat::Zero(3, 3);
    d(0, 0) = 3.0; d(1, 1) = 1.0; d(2, 2) = -1.0;
    auto [vals2, frame2] = hermitian_eigs_desc(d);
    CHECK(vals2[0] == doctest::Approx(3.0));
    CHECK(vals2[1] == doctest::Approx(1.0));
    CHECK(vals2[2] == doctest::Approx(-1.0));

    SplitMix64 rng(34);
    for (int t = 0; t < 100; ++t) {
        const int n = 2 + static_cast<int>(rng.below(5));
        const CMat g = random_hermitian(rng, n);
        auto [lam, u] = hermitian_eigs_desc(g);
        const CMat rec = u * lam.values().asDiagonal() * u.adjoint();
        CHECK((rec - g).norm() <= 1e-10 * (1.0 + g.norm()));
        for (int i = 0; i + 1 < n; ++i) CHECK(lam[i] >= lam[i + 1]);
    }

    CMat bad = CMat::Zero(2, 2);
    bad(0, 1) = Complex(1.0, 0.0);
    CHECK_THROWS_AS(hermitian_eigs_desc(bad), NonHermitianInput);
}

TEST_CASE("second derivative contraction") {
    // diagonal eta reduces to the F-Hessian quadratic form
    const auto op = HessianSumSpec::pure(3, 2);
    const Spectrum lam(make({3, 2, 1}));
    CMat eta = CMat::Zero(3, 3);
    eta(0, 0) = 1.0; eta(1, 1) = -2.0; eta(2, 2) = 0.5;
    const Mat h = F_hess(lam, op);
    Vec d(3); d << 1.0, -2.0, 0.5;
    CHECK(contraction_second_derivative(lam, op, eta) ==
          doctest::Approx(d.transpose() * h * d));

    // closed-form divided difference at lambda = (2,1), k = 2, m = 0
    const auto op2 = HessianSumSpec::pure(2, 2);
    CMat swap = CMat::Zero(2, 2);
    swap(0, 1) = 1.0; swap(1, 0) = 1.0;
    CHECK(contraction_second_derivative(Spectrum(make({2, 1})), op2, swap) ==
          doctest::Approx(-2.0));

    CMat nonherm = CMat::Zero(2, 2);
    nonherm(0, 1) = Complex(0.0, 1.0);
    nonherm(1, 0) = Complex(0.0, 1.0);
    CHECK_THROWS_AS(
        contraction_second_derivative(Spectrum(make({2, 1})), op2, nonherm),
        NonHermitianInput);
}

TEST_CASE("contraction matches matrix-path finite differences") {
    SplitMix64 rng(35);
    for (int t = 0; t < 120; ++t) {
        const int n = 3 + static_cast<int>(rng.below(3));
        const int k = 2 + static_cast<int>(rng.below(n - 1));
        const auto op = (t % 2) ? HessianSumSpec::pure(n, k)
                                : HessianSumSpec::from_roots(n, k, make({0.8}));
        Vec lam(n);
        for (int i = 0; i < n; ++i) lam[i] = rng.uniform(0.5, 5.0) + 0.6 * i;
        std::sort(lam.begin(), lam.end(), std::greater<double>());
        // enforce a minimum spectral gap of 0.5
        for (int i = 1; i < n; ++i) lam[i] = std::min(lam[i], lam[i - 1] - 0.5);
        const Spectrum spec(lam);
        const CMat eta = random_hermitian(rng, n);

        const double closed = contraction_second_derivative(spec, op, eta);
        // t -> F(lambda(A + t eta)) is a degree-k polynomial, so the
        // Richardson second difference is exact for k <= 5 and the step only
        // has to beat roundoff
        const double fd = oracle::fd_path_second(
            [&](double s) {
                const CMat g = CMat(lam.asDiagonal()) + s * eta;
                auto [vals, frame] = hermitian_eigs_desc(g);
                return F_value(vals, op);
            },
            5e-2);
        CHECK(std::abs(closed - fd) <= 1e-5 * std::max(1.0, std::abs(closed)));
    }
}

TEST_CASE("contraction invariant under simultaneous permutation") {
    SplitMix64 rng(36);
    for (int t = 0; t < 200; ++t) {
        const int n = 3 + static_cast<int>(rng.below(3));
        const auto op = HessianSumSpec::pure(n, 2);
        Vec lam(n);
        for (int i = 0; i < n; ++i) lam[i] = rng.uniform(-2.0, 4.0);
        const CMat eta = random_hermitian(rng, n);

        std::vector<int> perm(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.below(i + 1)]);
        Vec plam(n);
        CMat peta(n, n);
        for (int i = 0; i < n; ++i) {
            plam[i] = lam[perm[i]];
            for (int j = 0; j < n; ++j) peta(i, j) = eta(perm[i], perm[j]);
        }
        const double a = contraction_second_derivative(Spectrum(lam), op, eta);
        const double b = contraction_second_derivative(Spectrum(plam), op, peta);
        CHECK(std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(a)));
    }
}
