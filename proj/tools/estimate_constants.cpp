// Brute-force estimation of the abstract constants used by the inequality
// sweeps: run before freezing test fixtures, and available for re-runs.
//
//   estimate_constants [--samples N] [--seed S]
//
// Prints sup sigma_k/(x_1..x_k) per (n,k), the k-th entry bound constant,
// the entry floor constant, and the two quotient lower-bound constants.

#include "sumhess/cones.hpp"
#include "sumhess/quotients.hpp"
#include "sumhess/rng.hpp"
#include "sumhess/symfun.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>

using namespace sumhess;

namespace {

CVec direction(int n, std::uint64_t seed, std::uint64_t index) {
    SplitMix64 rng = per_sample_direction(seed, index);
    CVec xi(n);
    for (int i = 0; i < n; ++i) xi[i] = Complex(rng.normal(), rng.normal());
    return xi;
}

} // namespace

int main(int argc, char** argv) {
    std::uint64_t samples = 100000;
    std::uint64_t seed = 42;
    for (int i = 1; i < argc; ++i) {
        if (!std::strcmp(argv[i], "--samples") && i + 1 < argc)
            samples = std::strtoull(argv[++i], nullptr, 10);
        else if (!std::strcmp(argv[i], "--seed") && i + 1 < argc)
            seed = std::strtoull(argv[++i], nullptr, 10);
    }

    std::printf("sigma-product constants (sup sigma_k / prod x_1..x_k):\n");
    for (int n = 2; n <= 8; ++n) {
        for (int k = 1; k <= n; ++k) {
            double worst = 0.0;
            for (auto how : {ConeSampler::Box, ConeSampler::OrthantPerturbed}) {
                const auto est = estimate_sigma_product_constant(n, k, how, seed, samples);
                worst = std::max(worst, est.value);
            }
            std::printf("  n=%d k=%d  C=%.6f\n", n, k, worst);
        }
    }

    {
        double worst = 0.0;
        for (auto how : {ConeSampler::Box, ConeSampler::OrthantPerturbed})
            worst = std::max(worst,
                estimate_kth_entry_constant(3, 2, how, seed, samples).value);
        std::printf("kth-entry constant n=3 k=2: C=%.6f\n", worst);
    }

    {
        double worst = 0.0;
        for (auto how : {ConeSampler::Box, ConeSampler::OrthantPerturbed})
            worst = std::max(worst,
                estimate_entry_floor_constant(3, 2, 1.0, 1.0, how, seed, samples).value);
        std::printf("entry-floor constant n=3 k=2 A1=A2=1: K=%.6f\n", worst);
    }

    // quotient lower-bound constants at (n,k) = (4,3): infimum of LHS/RHS
    // over the orthant-sampler stream, directions from the paired stream
    {
        const int n = 4, k = 3;
        double chain_min = std::numeric_limits<double>::infinity();
        double tail_min = std::numeric_limits<double>::infinity();
        std::uint64_t accepted = 0;
        for (std::uint64_t idx = 0; accepted < samples; ++idx) {
            auto x = sample_gamma_k(n, k, ConeSampler::OrthantPerturbed, seed, idx);
            if (!x) continue;
            ++accepted;
            const CVec xi = direction(n, seed, idx);

            const double lhs0 = chain_bound_margin(*x, k, xi, 0.0);
            const double rhs_unit = lhs0 - chain_bound_margin(*x, k, xi, 1.0);
            if (rhs_unit > 1e-12 * (1.0 + std::abs(lhs0)))
                chain_min = std::min(chain_min, lhs0 / rhs_unit);

            const double tl0 = tail_projected_margin(*x, k, xi, 0.0);
            const double trhs = tl0 - tail_projected_margin(*x, k, xi, 1.0);
            if (trhs > 1e-12 * (1.0 + std::abs(tl0)))
                tail_min = std::min(tail_min, tl0 / trhs);

            // single-slot directions probe the bound separately
            for (int slot = 1; slot < k; ++slot) {
                CVec zs = CVec::Zero(n);
                zs[slot] = xi[slot];
                const double a0 = tail_projected_margin(*x, k, zs, 0.0);
                const double ar = a0 - tail_projected_margin(*x, k, zs, 1.0);
                if (ar > 1e-12 * (1.0 + std::abs(a0)))
                    tail_min = std::min(tail_min, a0 / ar);
            }
        }
        std::printf("chain constant n=4 k=3: C=%.6f\n", chain_min);
        std::printf("tail-bound constant n=4 k=3: C=%.6f\n", tail_min);
    }
    return 0;
}
