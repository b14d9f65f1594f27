#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sumhess/rng.hpp"
#include "sumhess/symfun.hpp"

#include <algorithm>

using namespace sumhess;

namespace {

Vec make(std::initializer_list<double> v) {
    Vec x(static_cast<int>(v.size()));
    int i = 0;
    for (double t : v) x[i++] = t;
    return x;
}

Vec random_vec(SplitMix64& rng, int n, double lo, double hi) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(lo, hi);
    return x;
}

} // namespace

TEST_CASE("elementary_all on reference inputs") {
    SymTable t = elementary_all(Spectrum(make({1, 1, 1, 1})), 2);
    CHECK(t.sigmas[0] == 1.0);
    CHECK(t.sigmas[1] == 4.0);
    CHECK(t.sigmas[2] == 6.0);

    t = elementary_all(Spectrum(make({1, 2, 3})), 3);
    CHECK(t.sigmas[0] == 1.0);
    CHECK(t.sigmas[1] == 6.0);
    CHECK(t.sigmas[2] == 11.0);
    CHECK(t.sigmas[3] == 6.0);

    t = elementary_all(Spectrum(make({0, 0, 0, 0})), 4);
    CHECK(t.sigmas[0] == 1.0);
    for (int j = 1; j <= 4; ++j) CHECK(t.sigmas[j] == 0.0);

    // degrees above n are zero
    t = elementary_all(Spectrum(make({2, 5})), 5);
    CHECK(t.sigmas[3] == 0.0);
    CHECK(t.sigmas[5] == 0.0);
}

TEST_CASE("elementary_all matches subset enumeration") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 400; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(9));
        const Vec x = random_vec(rng, n, -10.0, 10.0);
        const SymTable t = elementary_all(Spectrum(x), n);
        for (int k = 0; k <= n; ++k) {
            const double ref = oracle::brute_sigma(x, k);
            CHECK(std::abs(t.sigmas[k] - ref) <=
                  1e-12 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("permutation invariance up to roundoff") {
    SplitMix64 rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(6));
        Vec x = random_vec(rng, n, -8.0, 8.0);
        Vec y = x;
        // Fisher-Yates with the deterministic stream
        for (int i = n - 1; i > 0; --i)
            std::swap(y[i], y[rng.below(i + 1)]);
        const SymTable a = elementary_all(Spectrum(x), n);
        const SymTable b = elementary_all(Spectrum(y), n);
        for (int k = 1; k <= n; ++k) {
            const double scale = std::max(1.0, std::abs(a.sigmas[k]));
            CHECK(std::abs(a.sigmas[k] - b.sigmas[k]) <= 1e-13 * scale);
        }
    }
}

TEST_CASE("sigma_excluding") {
    const Spectrum x(make({1, 2, 3}));
    const int i0[] = {0};
    CHECK(sigma_excluding(x, 2, i0) == doctest::Approx(6.0).epsilon(1e-14));
    const int i12[] = {1, 2};
    CHECK(sigma_excluding(x, 0, i12) == 1.0);
    const Spectrum y(make({5, -1}));
    const int i1[] = {1};
    CHECK(sigma_excluding(y, 1, i1) == 5.0);
    // removing everything leaves sigma_0 = 1 and nothing else
    const int all[] = {0, 1, 2};
    CHECK(sigma_excluding(x, 0, all) == 1.0);
    CHECK(sigma_excluding(x, 1, all) == 0.0);
}

TEST_CASE("grad_sigma reference values") {
    Vec g = grad_sigma(Spectrum(make({1, 2, 3})), 2);
    CHECK(g[0] == 5.0);
    CHECK(g[1] == 4.0);
    CHECK(g[2] == 3.0);

    g = grad_sigma(Spectrum(make({1, 1, 1, 1})), 1);
    for (int i = 0; i < 4; ++i) CHECK(g[i] == 1.0);

    g = grad_sigma(Spectrum(make({2, 1})), 2);
    CHECK(g[0] == 1.0);
    CHECK(g[1] == 2.0);
}

TEST_CASE("grad_sigma matches Richardson differences") {
    SplitMix64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(5));
        const int k = 1 + static_cast<int>(rng.below(n));
        const Vec x = random_vec(rng, n, -5.0, 5.0);
        const Vec g = grad_sigma(Spectrum(x), k);
        const Vec fd = oracle::fd_gradient(
            [k](const Vec& v) { return oracle::brute_sigma(v, k); }, x);
        for (int i = 0; i < n; ++i)
            CHECK(std::abs(g[i] - fd[i]) <= 1e-7 * std::max(1.0, std::abs(g[i])));
    }
}

TEST_CASE("hess_sigma reference values and differences") {
    Mat h = hess_sigma(Spectrum(make({1, 2, 3})), 2);
    for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
            CHECK(h(p, q) == (p == q ? 0.0 : 1.0));

    h = hess_sigma(Spectrum(make({1, 2, 3})), 3);
    CHECK(h(0, 1) == 3.0);
    CHECK(h(0, 2) == 2.0);
    CHECK(h(1, 2) == 1.0);
    CHECK(h(0, 0) == 0.0);

    // k = 2 Hessian is input independent
    const Mat h2 = hess_sigma(Spectrum(make({-4, 7, 0.3})), 2);
    CHECK((h2 - hess_sigma(Spectrum(make({1, 2, 3})), 2)).norm() == 0.0);

    SplitMix64 rng(14);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(4));
        const int k = 2 + static_cast<int>(rng.below(n - 1));
        const Vec x = random_vec(rng, n, -4.0, 4.0);
        const Mat hh = hess_sigma(Spectrum(x), k);
        const Mat fd = oracle::fd_hessian(
            [k](const Vec& v) { return oracle::brute_sigma(v, k); }, x);
        for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q)
                CHECK(std::abs(hh(p, q) - fd(p, q)) <=
                      1e-5 * std::max(1.0, std::abs(hh(p, q))));
    }
}

TEST_CASE("rearrange_desc with stable ties") {
    auto [s1, p1] = rearrange_desc(Spectrum(make({3, 1, -1})));
    CHECK(s1.values() == make({3, 1, -1}));
    CHECK(p1 == std::vector<int>{0, 1, 2});

    auto [s2, p2] = rearrange_desc(Spectrum(make({1, 3, -1})));
    CHECK(s2.values() == make({3, 1, -1}));
    CHECK(p2 == std::vector<int>{1, 0, 2});

    auto [s3, p3] = rearrange_desc(Spectrum(make({2, 2, 2})));
    CHECK(s3.values() == make({2, 2, 2}));
    CHECK(p3 == std::vector<int>{0, 1, 2});

    auto [s4, p4] = rearrange_desc(Spectrum(make({1, 2, 2, 0})));
    CHECK(s4.values() == make({2, 2, 1, 0}));
    CHECK(p4 == std::vector<int>{1, 2, 0, 3});
    CHECK(s4.sorted_desc());
}

TEST_CASE("identity residuals on reference inputs") {
    // sum_i s_{k-1;i} x_i = k sigma_k at x = (1,2,3), k = 2: 5 + 8 + 9 = 22
    IdentityReport rep = check_identities(Spectrum(make({1, 2, 3})), 2);
    CHECK(rep.sum_grad_abs == 0.0);
    CHECK(rep.worst_rel <= 1e-14);

    // k = n: sum_i s_{n;i} = 0 = (n-n) s_n
    rep = check_identities(Spectrum(make({2, -3, 0.5, 4})), 4);
    CHECK(rep.sum_excl_abs == 0.0);

    // (1,1,1), k = 1: s_1 s_1 - 2 s_2 = 3 = sum_i s_{0;i} x_i^2
    rep = check_identities(Spectrum(make({1, 1, 1})), 1);
    CHECK(rep.sum_grad_sq_abs == 0.0);
}

TEST_CASE("identity residual sweep stays at 1e-10") {
    SplitMix64 rng(15);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(6));
        const int k = 1 + static_cast<int>(rng.below(n));
        const Vec x = random_vec(rng, n, -10.0, 10.0);
        worst = std::max(worst, check_identities(Spectrum(x), k).worst_rel);
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("spectrum validation") {
    CHECK_THROWS_AS(Spectrum(make({1})), PreconditionError);
    Vec bad = make({1, 2});
    bad[0] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS((Spectrum(bad)), PreconditionError);
    CHECK_THROWS_AS((Spectrum(make({1, 2}), true)), PreconditionError);
    CHECK_NOTHROW(Spectrum(make({2, 1}), true));
}
