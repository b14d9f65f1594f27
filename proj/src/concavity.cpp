#include "sumhess/concavity.hpp"

#include "sumhess/cones.hpp"
#include "sumhess/rng.hpp"
#include "sumhess/symfun.hpp"
#include "sumhess/util.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <optional>

namespace sumhess {

namespace {

void check_pre(const Spectrum& lam, const ConcavityParams& p, bool lifted) {
    if (!lam.sorted_desc())
        throw PreconditionError("margin matrix: lambda must be sorted descending");
    if (lam.n() != p.op.n())
        throw PreconditionError("margin matrix: dimension mismatch");
    if (!(lam[0] > 0.0))
        throw PreconditionError("margin matrix: lambda_1 must be positive");
    if (lam[lam.n() - 1] < -p.delta * lam[0])
        throw PreconditionError("margin matrix: dynamic psh condition violated");
    if (lifted) {
        const Vec table = sigma_table_raw(p.op.lifted(lam), p.op.k());
        for (int j = 1; j <= p.op.k(); ++j)
            if (!(table[j] > 0.0))
                throw ConeViolation("margin matrix: lifted spectrum not in Gamma_k");
    } else {
        if (!in_gamma_k(lam, p.op.k()).inside)
            throw ConeViolation("margin matrix: lambda not in Gamma_k");
    }
}

Mat assemble(const Vec& hat, int n, int k, double lambda1, double level,
             double gamma, double delta) {
    Vec v(n);
    for (int i = 0; i < n; ++i) {
        const int idx[1] = {i};
        v[i] = sigma_excluding_raw(hat, k - 1, idx);
    }
    Mat M(n, n);
    for (int p = 0; p < n; ++p) {
        for (int q = p; q < n; ++q) {
            double entry = 2.0 * v[p] * v[q] / (level * level);
            if (p != q) {
                const int idx[2] = {p, q};
                entry -= sigma_excluding_raw(hat, k - 2, idx) / level;
            }
            M(p, q) = M(q, p) = entry;
        }
    }
    for (int i = 1; i < n; ++i)
        M(i, i) += v[i] / ((1.0 + delta) * lambda1 * level);
    M(0, 0) -= (1.0 - gamma) * v[0] / (lambda1 * level);
    return M;
}

} // namespace

Mat margin_matrix_sigma(const Spectrum& lambda_desc, const ConcavityParams& p) {
    if (p.op.m() != 0)
        throw PreconditionError("margin_matrix_sigma: requires m == 0");
    check_pre(lambda_desc, p, /*lifted=*/false);
    const int k = p.op.k();
    const double level = sigma_table_raw(lambda_desc.values(), k)[k];
    return assemble(lambda_desc.values(), lambda_desc.n(), k, lambda_desc[0],
                    level, p.gamma, p.delta);
}

Mat margin_matrix_F(const Spectrum& lambda_desc, const ConcavityParams& p) {
    check_pre(lambda_desc, p, /*lifted=*/true);
    const Vec hat = p.op.lifted(lambda_desc);
    const int k = p.op.k();
    const double level = sigma_table_raw(hat, k)[k];
    return assemble(hat, lambda_desc.n(), k, lambda_desc[0], level, p.gamma,
                    p.delta);
}

namespace {

// Compensated Rayleigh quotient of a unit vector; in the graded regime every
// addend is margin-sized where the vector is large, so this is accurate.
double rayleigh(const Mat& M, const Vec& v) {
    double sum = 0.0, comp = 0.0;
    const int n = static_cast<int>(M.rows());
    auto add = [&](double term) {
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - t) + term;
        else
            comp += (term - t) + sum;
        sum = t;
    };
    for (int i = 0; i < n; ++i) {
        add(M(i, i) * v[i] * v[i]);
        for (int j = i + 1; j < n; ++j) add(2.0 * M(i, j) * v[i] * v[j]);
    }
    return (sum + comp) / v.squaredNorm();
}

} // namespace

EigCertificate certify_min_margin(const Mat& M) {
    const int n = static_cast<int>(M.rows());
    std::vector<Vec> candidates;

    Eigen::SelfAdjointEigenSolver<Mat> direct(M);
    candidates.push_back(direct.eigenvectors().col(0));

    bool diag_positive = true;
    for (int i = 0; i < n; ++i)
        if (!(M(i, i) > 0.0)) {
            diag_positive = false;
            candidates.push_back(Vec::Unit(n, i));
        }
    if (diag_positive) {
        Vec d(n);
        for (int i = 0; i < n; ++i) d[i] = 1.0 / std::sqrt(M(i, i));
        Mat S(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) S(i, j) = M(i, j) * d[i] * d[j];
        Eigen::SelfAdjointEigenSolver<Mat> scaled(0.5 * (S + S.transpose()));
        Vec mapped = scaled.eigenvectors().col(0).cwiseProduct(d);
        mapped.normalize();
        candidates.push_back(std::move(mapped));
    }

    EigCertificate best{std::numeric_limits<double>::infinity(), Vec()};
    for (const Vec& c : candidates) {
        const double r = rayleigh(M, c);
        if (r < best.min_margin) {
            best.min_margin = r;
            best.minimizer = c / c.norm();
        }
    }
    return best;
}

MarginReport min_margin(const Spectrum& lambda_desc, const ConcavityParams& p) {
    const Mat M = (p.op.m() == 0) ? margin_matrix_sigma(lambda_desc, p)
                                  : margin_matrix_F(lambda_desc, p);
    const EigCertificate cert = certify_min_margin(M);

    MarginReport rep;
    rep.lambda = lambda_desc.values();
    rep.min_margin = cert.min_margin;
    rep.minimizer = cert.minimizer;
    const int k = p.op.k();
    rep.sigma_level = (p.op.m() == 0)
        ? sigma_table_raw(lambda_desc.values(), k)[k]
        : sigma_table_raw(p.op.lifted(lambda_desc), k)[k];
    rep.lambda1 = lambda_desc[0];
    rep.psh_margin = lambda_desc[lambda_desc.n() - 1] + p.delta * lambda_desc[0];
    rep.feasible = true;
    rep.resorted = false;
    rep.sample_index = 0;
    return rep;
}

namespace {

struct Candidate {
    MarginReport report;
    std::string reject;  // empty when accepted
};

// One attempt of the sweep sampler. Deterministic in (cfg, p, index).
Candidate attempt_sample(const SweepConfig& cfg, const ConcavityParams& p,
                         std::uint64_t index) {
    Candidate out;
    out.reject.clear();
    SplitMix64 rng = per_sample(cfg.seed, index);
    const int n = p.op.n();
    const int k = p.op.k();

    const double big = rng.log_uniform(cfg.lambda1_min, cfg.lambda1_max);
    Vec tau(n - 1);
    for (int i = 0; i < n - 1; ++i) tau[i] = rng.uniform(0.05, 1.0);
    if (rng.uniform() < 0.4) {
        double mn = tau[0];
        for (int i = 1; i < n - 1; ++i) mn = std::min(mn, tau[i]);
        tau[n - 2] = -rng.uniform(0.0, 0.5) * mn;
    }

    // scale the tail so sigma_k(lambda) hits the target level
    Vec full(n);
    full[0] = big;
    auto level_at = [&](double s) {
        for (int i = 0; i < n - 1; ++i) full[i + 1] = s * tau[i];
        return sigma_table_raw(full, k)[k];
    };
    double shi = 1.0;
    while (level_at(shi) < cfg.sigma_level) {
        shi *= 2.0;
        if (shi > 1e12) { out.reject = "level_unsolvable"; return out; }
    }
    double slo = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double smid = 0.5 * (slo + shi);
        if (level_at(smid) < cfg.sigma_level) slo = smid; else shi = smid;
    }
    level_at(0.5 * (slo + shi));

    Vec sorted = full;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const bool resorted = (sorted[0] != full[0]);

    Spectrum lam(sorted, true);
    if (!in_gamma_k(lam, k).inside) { out.reject = "outside_cone"; return out; }
    if (lam[n - 1] < -p.delta * lam[0]) { out.reject = "psh_violated"; return out; }
    const double level = sigma_table_raw(lam.values(), k)[k];
    if (std::abs(level - cfg.sigma_level) > 1e-6 * std::max(1.0, cfg.sigma_level)) {
        out.reject = "level_missed";
        return out;
    }
    if (p.op.m() > 0) {
        const Vec table = sigma_table_raw(p.op.lifted(lam), k);
        for (int j = 1; j <= k; ++j)
            if (!(table[j] > 0.0)) { out.reject = "lifted_cone_violated"; return out; }
    }

    out.report = min_margin(lam, p);
    out.report.sample_index = index;
    out.report.resorted = resorted;
    return out;
}

} // namespace

SweepResult concavity_sweep(const SweepConfig& cfg, const ConcavityParams& p) {
    SweepResult res;
    res.global_min = std::numeric_limits<double>::infinity();
    res.violations = 0;
    res.attempts = 0;
    res.reports.reserve(cfg.samples);

    const std::uint64_t max_attempts = cfg.samples * 1000 + 1000;
    const std::uint64_t block =
        std::max<std::uint64_t>(1024, cfg.samples / 4);
    std::uint64_t next = 0;
    std::vector<Candidate> buf(block);

    while (res.reports.size() < cfg.samples) {
        if (next >= max_attempts)
            throw std::runtime_error("concavity_sweep: acceptance rate too low");
        const std::uint64_t count = std::min<std::uint64_t>(block, max_attempts - next);
        parallel_for(count, [&](std::size_t i) {
            buf[i] = attempt_sample(cfg, p, next + i);
        }, cfg.threads);
        for (std::uint64_t i = 0; i < count && res.reports.size() < cfg.samples; ++i) {
            ++res.attempts;
            if (!buf[i].reject.empty()) {
                ++res.rejects[buf[i].reject];
                continue;
            }
            const MarginReport& r = buf[i].report;
            res.global_min = std::min(res.global_min, r.min_margin);
            if (r.min_margin < 0.0) ++res.violations;
            res.reports.push_back(r);
        }
        next += count;
    }
    return res;
}

std::vector<ThresholdCell> threshold_scan(const std::vector<double>& deltas,
                                          const std::vector<double>& lambda1s,
                                          std::uint64_t samples_per_cell,
                                          std::uint64_t seed, double gamma,
                                          const HessianSumSpec& op) {
    std::vector<ThresholdCell> table;
    std::uint64_t cell_index = 0;
    for (double delta : deltas) {
        for (double big : lambda1s) {
            ConcavityParams p(gamma, delta, op);
            SweepConfig cfg;
            cfg.samples = samples_per_cell;
            cfg.seed = seed + 0x1000 * cell_index;
            cfg.lambda1_min = big;
            cfg.lambda1_max = big;
            SweepResult r = concavity_sweep(cfg, p);
            table.push_back({delta, big, r.global_min, r.violations,
                             static_cast<std::uint64_t>(r.reports.size())});
            ++cell_index;
        }
    }
    return table;
}

bool top_exclusion_dominates(const Spectrum& lambda_normalized, int k) {
    if (!lambda_normalized.sorted_desc())
        throw PreconditionError("top_exclusion_dominates: spectrum must be sorted");
    if (std::abs(lambda_normalized[0] - 1.0) > 1e-12)
        throw PreconditionError("top_exclusion_dominates: lambda_1 must be 1");
    const GammaCheck chk = in_gamma_k(lambda_normalized, k);
    if (!chk.inside)
        throw ConeViolation("top_exclusion_dominates: not in Gamma_k");
    const int idx[1] = {0};
    const double sk1 = sigma_excluding_raw(lambda_normalized.values(), k, idx);
    const double sk = chk.margins[k - 1];
    return sk1 < -sk / (16.0 * k);
}

RatioReport regime_ratios(const Spectrum& lam, int k, double delta) {
    const int n = lam.n();
    if (!lam.sorted_desc() || std::abs(lam[0] - 1.0) > 1e-12)
        throw PreconditionError("regime_ratios: normalized descending spectrum required");
    RatioReport out{};
    const double ln = lam[n - 1];
    out.r1_unbounded = std::abs(ln) <= 1e-300;
    out.r1 = out.r1_unbounded ? std::numeric_limits<double>::infinity()
                              : lam[k - 1] / std::abs(ln);

    const Vec table = sigma_table_raw(lam.values(), std::min(k + 1, n));
    const double skp1 = (k + 1 <= n) ? table[k + 1] : 0.0;
    double prod_head = 1.0;  // lambda_1 .. lambda_{k-1}
    for (int i = 0; i < k - 1; ++i) prod_head *= lam[i];
    const double lk2 = lam[k - 1] * lam[k - 1];
    out.r2 = -skp1 / (prod_head * lk2);

    const int idx[1] = {0};
    const double skm1_1 = sigma_excluding_raw(lam.values(), k - 1, idx);
    double prod_2 = 1.0;  // lambda_2 .. lambda_{k-1}
    for (int i = 1; i < k - 1; ++i) prod_2 *= lam[i];
    out.r3 = skm1_1 / (prod_2 * lk2);

    const double thr = std::sqrt(delta);
    out.ell = 0;
    for (int i = 0; i < n; ++i)
        if (lam[i] >= thr) out.ell = i + 1;
    return out;
}

} // namespace sumhess
