#include "sumhess/cones.hpp"

#include "sumhess/rng.hpp"
#include "sumhess/symfun.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace sumhess {

GammaCheck in_gamma_k(const Spectrum& x, int k) {
    if (k < 0 || k > x.n())
        throw PreconditionError("in_gamma_k: need 0 <= k <= n");
    const Vec table = sigma_table_raw(x.values(), k);
    GammaCheck out;
    out.margins = table.segment(1, k);
    out.inside = true;
    for (int j = 0; j < k; ++j)
        if (!(out.margins[j] > 0.0)) out.inside = false;
    return out;
}

int gamma_index(const Spectrum& x) {
    const Vec table = sigma_table_raw(x.values(), x.n());
    for (int j = 1; j <= x.n(); ++j)
        if (!(table[j] > 0.0)) return j - 1;
    return x.n();
}

ConeMembership cone_membership(const Spectrum& x) {
    ConeMembership m;
    m.sigmas = sigma_table_raw(x.values(), x.n());
    m.k_index = x.n();
    for (int j = 1; j <= x.n(); ++j)
        if (!(m.sigmas[j] > 0.0)) { m.k_index = j - 1; break; }
    return m;
}

bool derivative_positivity_check(const Spectrum& x, int k) {
    const int n = x.n();
    if (k < 1 || k > n)
        throw PreconditionError("derivative_positivity_check: need 1 <= k <= n");
    if (n > 20)
        throw PreconditionError("derivative_positivity_check: n too large");
    // sigma_k is multilinear, so the distinct derivatives are indexed by the
    // subsets S with |S| < k; the derivative is sigma_{k-|S|} with S removed.
    std::vector<int> idx;
    idx.reserve(n);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        const int s = std::popcount(mask);
        if (s >= k) continue;
        idx.clear();
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        if (!(sigma_excluding_raw(x.values(), k - s, idx) > 0.0)) return false;
    }
    return true;
}

double dynamic_psh_margin(const Spectrum& x_desc, double delta) {
    if (!x_desc.sorted_desc())
        throw PreconditionError("dynamic_psh_margin: spectrum must be sorted descending");
    if (!(delta > 0.0))
        throw PreconditionError("dynamic_psh_margin: delta must be positive");
    if (!(x_desc[0] > 0.0))
        throw PreconditionError("dynamic_psh_margin: leading eigenvalue must be positive");
    return x_desc[x_desc.n() - 1] + delta * x_desc[0];
}

double kth_entry_bound_margin(const Spectrum& x_desc, int k, double C) {
    if (!x_desc.sorted_desc())
        throw PreconditionError("kth_entry_bound_margin: spectrum must be sorted descending");
    const GammaCheck chk = in_gamma_k(x_desc, k);
    if (!chk.inside)
        throw ConeViolation("kth_entry_bound_margin: x not in Gamma_k");
    const double sk = chk.margins[k - 1];
    const double xn = x_desc[x_desc.n() - 1];
    return C * (std::pow(sk, 1.0 / k) + std::abs(xn)) - x_desc[k - 1];
}

bool entry_floor_check(const Spectrum& x, int k, double A1, double A2, double K) {
    const GammaCheck chk = in_gamma_k(x, k);
    if (!chk.inside)
        throw ConeViolation("entry_floor_check: x not in Gamma_k");
    const Vec table = sigma_table_raw(x.values(), std::min(k + 1, x.n()));
    const double skp1 = (k + 1 <= x.n()) ? table[k + 1] : 0.0;
    if (!(table[k] <= A1))
        throw PreconditionError("entry_floor_check: sigma_k exceeds A1");
    if (!(skp1 >= -A2))
        throw PreconditionError("entry_floor_check: sigma_{k+1} below -A2");
    return x.values().minCoeff() + K >= 0.0;
}

namespace {

Vec draw_raw(int n, ConeSampler how, SplitMix64& rng) {
    Vec x(n);
    if (how == ConeSampler::Box) {
        for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 10.0);
    } else {
        for (int i = 0; i < n; ++i) x[i] = rng.uniform(0.0, 5.0);
        for (int i = 0; i < n; ++i) x[i] += 1.5 * rng.normal();
    }
    return x;
}

} // namespace

std::optional<Spectrum> sample_gamma_k(int n, int k, ConeSampler how,
                                       std::uint64_t seed, std::uint64_t index) {
    SplitMix64 rng = per_sample(seed, index);
    Vec x = draw_raw(n, how, rng);
    const Vec table = sigma_table_raw(x, k);
    for (int j = 1; j <= k; ++j)
        if (!(table[j] > 0.0)) return std::nullopt;
    std::sort(x.begin(), x.end(), std::greater<double>());
    return Spectrum(std::move(x), true);
}

namespace {

template <typename Fn>
ConstantEstimate estimate_sup(int n, int k, ConeSampler how, std::uint64_t seed,
                              std::uint64_t accepted_target, Fn&& value_of) {
    ConstantEstimate est{-std::numeric_limits<double>::infinity(), {}};
    const std::uint64_t max_tries = accepted_target * 1000;
    for (std::uint64_t idx = 0; est.stats.accepted < accepted_target; ++idx) {
        if (idx >= max_tries)
            throw std::runtime_error("constant estimation: acceptance rate too low");
        ++est.stats.tried;
        auto x = sample_gamma_k(n, k, how, seed, idx);
        if (!x) continue;
        const auto v = value_of(*x);
        if (!v) continue;
        ++est.stats.accepted;
        est.value = std::max(est.value, *v);
    }
    return est;
}

} // namespace

ConstantEstimate estimate_kth_entry_constant(int n, int k, ConeSampler how,
                                             std::uint64_t seed,
                                             std::uint64_t accepted_target) {
    return estimate_sup(n, k, how, seed, accepted_target,
        [k](const Spectrum& x) -> std::optional<double> {
            const double sk = sigma_table_raw(x.values(), k)[k];
            const double denom = std::pow(sk, 1.0 / k) + std::abs(x[x.n() - 1]);
            if (denom <= 0.0) return std::nullopt;
            return x[k - 1] / denom;
        });
}

ConstantEstimate estimate_sigma_product_constant(int n, int k, ConeSampler how,
                                                 std::uint64_t seed,
                                                 std::uint64_t accepted_target) {
    return estimate_sup(n, k, how, seed, accepted_target,
        [k](const Spectrum& x) -> std::optional<double> {
            const double sk = sigma_table_raw(x.values(), k)[k];
            double prod = 1.0;
            for (int i = 0; i < k; ++i) prod *= x[i];
            if (!(prod > 0.0)) return std::nullopt;  // cannot happen strictly inside
            return sk / prod;
        });
}

ConstantEstimate estimate_entry_floor_constant(int n, int k, double A1, double A2,
                                               ConeSampler how, std::uint64_t seed,
                                               std::uint64_t accepted_target) {
    return estimate_sup(n, k, how, seed, accepted_target,
        [n, k, A1, A2](const Spectrum& x) -> std::optional<double> {
            const Vec table = sigma_table_raw(x.values(), std::min(k + 1, n));
            const double skp1 = (k + 1 <= n) ? table[k + 1] : 0.0;
            if (!(table[k] <= A1) || !(skp1 >= -A2)) return std::nullopt;
            return -x.values().minCoeff();
        });
}

} // namespace sumhess
