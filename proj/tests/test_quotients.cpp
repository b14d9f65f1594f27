#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sweeps.hpp"
#include "sumhess/quotients.hpp"
#include "sumhess/symfun.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

using namespace sumhess;

namespace {

Vec make(std::initializer_list<double> v) {
    Vec x(static_cast<int>(v.size()));
    int i = 0;
    for (double t : v) x[i++] = t;
    return x;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

} // namespace

TEST_CASE("newton quotient reference values") {
    CHECK(newton_quotient(Spectrum(make({2, 1})), 2) == doctest::Approx(2.0 / 3.0));
    // constant vector: q_k = binom(n,k)/binom(n,k-1)
    for (int n = 2; n <= 6; ++n)
        for (int k = 1; k <= n; ++k) {
            Vec ones = Vec::Ones(n);
            CHECK(newton_quotient(Spectrum(ones), k) ==
                  doctest::Approx(binom(n, k) / binom(n, k - 1)));
        }
    // q_1 is sigma_1
    const Spectrum x(make({3, -1, 0.5}));
    CHECK(newton_quotient(x, 1) == doctest::Approx(2.5));

    const int i0[] = {0};
    CHECK(newton_quotient_excluding(x, 1, i0) == doctest::Approx(-0.5));

    Vec degenerate = make({1, -1});
    CHECK_THROWS_AS(newton_quotient(Spectrum(degenerate), 2),
                    DegenerateDenominator);
}

TEST_CASE("quotient hessian form on reference inputs") {
    // q_2 = x1 x2 / (x1 + x2): d^2/dx1^2 = -2 x2^2 / (x1+x2)^3
    CVec e1 = CVec::Zero(2);
    e1[0] = 1.0;
    CHECK(quotient_hessian_form(Spectrum(make({2, 1})), 2, e1) ==
          doctest::Approx(-2.0 / 27.0));

    // q_1 is linear so the form vanishes
    CVec xi(3);
    xi << Complex(1, 2), Complex(-0.5, 0), Complex(0, -1);
    CHECK(quotient_hessian_form(Spectrum(make({2, 1, 0.5})), 1, xi) == 0.0);
}

TEST_CASE("quotient hessian matches finite differences") {
    std::uint64_t found = 0;
    for (std::uint64_t idx = 0; found < 150; ++idx) {
        const int n = 3 + static_cast<int>(idx % 4);
        const int k = 2 + static_cast<int>(idx % (n - 1));
        auto xs = sweeps::cone_sample(n, k, 42, idx);
        if (!xs) continue;
        ++found;
        const Mat h = quotient_hessian(*xs, k);
        const Mat fd = oracle::fd_hessian(
            [k](const Vec& v) {
                const Vec t = sigma_table_raw(v, k);
                return t[k] / t[k - 1];
            },
            xs->values());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                CHECK(std::abs(h(i, j) - fd(i, j)) <=
                      1e-6 * std::max(1.0, std::abs(h(i, j))));
    }
}

TEST_CASE("q2 identity: exact complex-direction equality") {
    // hand value: x = (2,1), xi = e1 gives both sides 2/27
    CVec e1 = CVec::Zero(2);
    e1[0] = 1.0;
    CHECK(q2_identity_residual(Spectrum(make({2, 1})), e1) <= 1e-15);

    // xi proportional to x makes both sides vanish
    const Spectrum x(make({3, 1.5, 0.25}));
    CVec prop(3);
    for (int i = 0; i < 3; ++i) prop[i] = Complex(0.7, -0.3) * x[i];
    CHECK(q2_identity_residual(x, prop) <= 1e-14);

    std::uint64_t found = 0;
    for (std::uint64_t idx = 0; found < 10000; ++idx) {
        const int n = 3 + static_cast<int>(idx % 4);
        auto xs = sweeps::cone_sample(n, 2, 42, idx);
        if (!xs) continue;
        ++found;
        const CVec xi = sweeps::complex_direction(n, 42, idx);
        CHECK(q2_identity_residual(*xs, xi) <= 1e-10 * (1.0 + xi.squaredNorm()));
    }
}

TEST_CASE("quotient recursion margin is nonnegative") {
    // zero direction: both sides vanish
    const Spectrum ones(make({1, 1, 1}));
    CHECK(quotient_recursion_margin(ones, 1, CVec::Zero(3)) == 0.0);

    // hand-checkable k = 1 case stays nonnegative
    CVec xi(3);
    xi << Complex(1, 0), Complex(0, 1), Complex(-1, 0.5);
    CHECK(quotient_recursion_margin(ones, 1, xi) >= 0.0);

    std::uint64_t found = 0;
    double worst = 0.0;
    for (std::uint64_t idx = 0; found < 10000; ++idx) {
        const int n = 3 + static_cast<int>(idx % 4);  // 3..6
        const int kp1 = 2 + static_cast<int>(idx % (n - 1));
        auto xs = sweeps::cone_sample(n, kp1, 42, idx);
        if (!xs) continue;
        ++found;
        const CVec xi = sweeps::complex_direction(n, 42, idx);
        const double margin = quotient_recursion_margin(*xs, kp1 - 1, xi);
        const double scale = 1.0 + xi.squaredNorm();
        worst = std::min(worst, margin / scale);
        CHECK(margin >= -1e-10 * scale);
    }
    CHECK(worst >= -1e-10);
}

TEST_CASE("q_k is concave on Gamma_k") {
    std::uint64_t found = 0;
    for (std::uint64_t idx = 0; found < 10000; ++idx) {
        const int n = 3 + static_cast<int>(idx % 4);
        const int k = 2 + static_cast<int>(idx % (n - 1));
        auto xs = sweeps::cone_sample(n, k, 42, idx);
        if (!xs) continue;
        ++found;
        const Mat h = quotient_hessian(*xs, k);
        Eigen::SelfAdjointEigenSolver<Mat> es(h);
        const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
        CHECK(es.eigenvalues().maxCoeff() <= 1e-10 * scale);
    }
}

TEST_CASE("homogeneity of q and its hessian form") {
    std::uint64_t found = 0;
    for (std::uint64_t idx = 0; found < 300; ++idx) {
        const int n = 3 + static_cast<int>(idx % 3);
        const int k = 2 + static_cast<int>(idx % (n - 1));
        auto xs = sweeps::cone_sample(n, k, 99, idx);
        if (!xs) continue;
        ++found;
        const CVec xi = sweeps::complex_direction(n, 99, idx);
        const double q0 = newton_quotient(*xs, k);
        const double f0 = quotient_hessian_form(*xs, k, xi);
        for (double t : {0.5, 2.0, 10.0}) {
            const Spectrum tx(Vec(t * xs->values()), true);
            CHECK(newton_quotient(tx, k) ==
                  doctest::Approx(t * q0).epsilon(1e-10));
            CHECK(quotient_hessian_form(tx, k, xi) ==
                  doctest::Approx(f0 / t).epsilon(1e-10));
        }
    }
}

TEST_CASE("chain lower bound with the frozen constant") {
    const int n = 4, k = 3;
    const double C = sweeps::frozen::chain_constant_4_3;

    // zero direction: zero margin
    auto first = sweeps::cone_sample(n, k, 42, 0);
    std::uint64_t idx0 = 0;
    while (!first) first = sweeps::cone_sample(n, k, 42, ++idx0);
    CHECK(chain_bound_margin(*first, k, CVec::Zero(n), C) == 0.0);

    std::uint64_t found = 0;
    for (std::uint64_t idx = 0; found < 10000; ++idx) {
        auto xs = sweeps::cone_sample(n, k, 42, idx);
        if (!xs) continue;
        ++found;
        const CVec xi = sweeps::complex_direction(n, 42, idx);
        const double margin = chain_bound_margin(*xs, k, xi, C);
        CHECK(margin >= -1e-10 * (1.0 + xi.squaredNorm()));
    }
}

TEST_CASE("projection and split-direction lower bound") {
    const int n = 4, k = 3;
    const Spectrum x(make({4, 3, 2, 1}), true);

    // projection is idempotent and kills the tail component along x
    CVec z(4);
    z << Complex(9, 9), Complex(1, -2), Complex(0.5, 0.25), Complex(-1, 1);
    const CVec p1 = project_tail(x, k, z);
    const CVec p2 = project_tail(x, k, p1);
    CHECK((p1 - p2).norm() <= 1e-14 * (1.0 + p1.norm()));
    CHECK(p1[0] == Complex(0.0, 0.0));
    Complex along(0, 0);
    for (int i = k - 1; i < n; ++i) along += x[i] * p1[i];
    CHECK(std::abs(along) <= 1e-13 * p1.norm());

    const double C = sweeps::frozen::tail_constant_4_3;
    CHECK(tail_projected_margin(x, k, CVec::Zero(n), C) == 0.0);

    std::uint64_t found = 0;
    for (std::uint64_t idx = 0; found < 10000; ++idx) {
        auto xs = sweeps::cone_sample(n, k, 42, idx);
        if (!xs) continue;
        ++found;
        const CVec zeta = sweeps::complex_direction(n, 42, idx);
        const double margin = tail_projected_margin(*xs, k, zeta, C);
        CHECK(margin >= -1e-10 * (1.0 + zeta.squaredNorm()));
    }

    // direction supported on slot 2 only (1-based) stays certified
    std::uint64_t found2 = 0;
    for (std::uint64_t idx = 0; found2 < 2000; ++idx) {
        auto xs = sweeps::cone_sample(n, k, 42, idx);
        if (!xs) continue;
        ++found2;
        CVec zeta = CVec::Zero(n);
        zeta[1] = sweeps::complex_direction(n, 42, idx)[1];
        CHECK(tail_projected_margin(*xs, k, zeta, C) >=
              -1e-10 * (1.0 + zeta.squaredNorm()));
    }
}

TEST_CASE("cone preconditions are enforced") {
    const Spectrum bad(make({3, 1, -1}), true);
    CVec xi = CVec::Zero(3);
    CHECK_THROWS_AS(quotient_hessian(bad, 2), ConeViolation);
    CHECK_THROWS_AS(quotient_recursion_margin(bad, 1, xi), ConeViolation);
}
