// Batch-verification CLI: sweeps for the symmetric-function identities, cone
// properties, operator lift, quotient concavity, the key concavity margin,
// and the periodic torus solver.
//
// Exit status: 0 on success with zero violations, 1 on assertion violations
// or solver failure (with CSV witnesses), 2 on configuration errors.

#include <CLI11.hpp>

#include "sumhess/concavity.hpp"
#include "sumhess/cones.hpp"
#include "sumhess/quotients.hpp"
#include "sumhess/report.hpp"
#include "sumhess/rng.hpp"
#include "sumhess/solver/config.hpp"
#include "sumhess/solver/torus.hpp"
#include "sumhess/sum_operator.hpp"
#include "sumhess/symfun.hpp"

#include <chrono>
#include <cstdio>
#include <optional>

using namespace sumhess;

namespace {

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - t0).count();
    }
};

std::string vec_str(const Vec& v) {
    std::string s;
    for (int i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += fmt17(v[i]);
    }
    return s;
}

Vec parse_reals(const std::vector<double>& v) {
    Vec out(static_cast<int>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

int finish(const std::string& subcommand, OrderedJson summary,
           const std::string& json_path, std::uint64_t violations,
           const Timer& timer) {
    summary["subcommand"] = subcommand;
    summary["violations"] = violations;
    summary["wall_ms"] = timer.ms();
    write_json(json_path, summary);
    if (violations) {
        std::fprintf(stderr, "%s: %llu violation(s); see CSV witnesses\n",
                     subcommand.c_str(), static_cast<unsigned long long>(violations));
        return 1;
    }
    return 0;
}

int cmd_identities(int n, int k_opt, std::uint64_t samples, std::uint64_t seed,
                   double tol, const std::string& csv_path,
                   const std::string& json_path) {
    Timer timer;
    CsvWriter csv(csv_path);
    csv.header({"sample", "n", "k", "slot_worst_rel", "sum_excl_rel",
                "sum_grad_rel", "sum_grad_sq_rel", "worst_rel", "violation"});
    std::uint64_t violations = 0;
    double worst = 0.0;
    std::vector<int> ks;
    if (k_opt > 0) ks.push_back(k_opt);
    else for (int k = 1; k <= n; ++k) ks.push_back(k);

    std::uint64_t row = 0;
    for (int k : ks) {
        for (std::uint64_t i = 0; i < samples; ++i, ++row) {
            SplitMix64 rng = per_sample(seed, row);
            Vec x(n);
            for (int j = 0; j < n; ++j) x[j] = rng.uniform(-10.0, 10.0);
            const IdentityReport rep = check_identities(Spectrum(x), k);
            const bool bad = rep.worst_rel > tol;
            violations += bad;
            worst = std::max(worst, rep.worst_rel);
            csv.row({std::to_string(row), std::to_string(n), std::to_string(k),
                     fmt17(rep.per_slot_rel.maxCoeff()), fmt17(rep.sum_excl_rel),
                     fmt17(rep.sum_grad_rel), fmt17(rep.sum_grad_sq_rel),
                     fmt17(rep.worst_rel), bad ? "1" : "0"});
        }
    }
    OrderedJson j;
    j["config"] = {{"n", n}, {"k", k_opt}, {"samples", samples}, {"seed", seed},
                   {"tol", tol}};
    j["rows"] = row;
    j["worst_rel"] = worst;
    return finish("identities", std::move(j), json_path, violations, timer);
}

int cmd_cone_check(int n, int k, std::uint64_t samples, std::uint64_t seed,
                   std::uint64_t estimate_samples, const std::string& csv_path,
                   const std::string& json_path) {
    Timer timer;
    CsvWriter csv(csv_path);
    csv.header({"sample", "margin4", "grad_order_margin", "removal_ok",
                "product_lower_margin", "alt_agrees", "violation"});
    std::uint64_t violations = 0, accepted = 0;
    for (std::uint64_t idx = 0; accepted < samples; ++idx) {
        if (idx > samples * 1000 + 1000)
            throw ConfigError("cone-check: acceptance rate too low");
        auto xs = sample_gamma_k(n, k, ConeSampler::OrthantPerturbed, seed, idx);
        if (!xs) continue;
        ++accepted;
        const Spectrum& x = *xs;
        const Vec g = grad_sigma(x, k);
        const Vec table = sigma_table_raw(x.values(), k);
        const double sk = table[k];

        const double m4 = x[0] * g[0] - (double(k) / n) * sk;
        double order_margin = 0.0;
        for (int i = 0; i + 1 < n; ++i)
            order_margin = std::min(order_margin, g[i + 1] - g[i]);
        bool removal_ok = true;
        for (int i = 0; i < n && removal_ok; ++i) {
            Vec red(n - 1);
            int w = 0;
            for (int j = 0; j < n; ++j)
                if (j != i) red[w++] = x[j];
            removal_ok = in_gamma_k(Spectrum(red), k - 1).inside;
        }
        double prod = 1.0;
        for (int i = 0; i + 1 < k; ++i) prod *= x[i];
        const double lower_margin = table[k - 1] - prod;
        const bool alt_agrees =
            derivative_positivity_check(x, k) == in_gamma_k(x, k).inside;

        const double scale = std::max(1.0, std::abs(sk));
        const bool bad = m4 < -1e-12 * scale ||
                         order_margin < -1e-12 * std::max(1.0, g.cwiseAbs().maxCoeff()) ||
                         !removal_ok ||
                         lower_margin < -1e-12 * std::max(1.0, std::abs(table[k - 1])) ||
                         !alt_agrees;
        violations += bad;
        csv.row({std::to_string(idx), fmt17(m4), fmt17(order_margin),
                 removal_ok ? "1" : "0", fmt17(lower_margin),
                 alt_agrees ? "1" : "0", bad ? "1" : "0"});
    }

    OrderedJson j;
    j["config"] = {{"n", n}, {"k", k}, {"samples", samples}, {"seed", seed},
                   {"estimate_samples", estimate_samples}};
    if (estimate_samples) {
        // abstract-constant estimates, reported but never asserted
        const auto c7 = estimate_sigma_product_constant(
            n, k, ConeSampler::Box, seed, estimate_samples);
        const auto c22 = estimate_kth_entry_constant(
            n, k, ConeSampler::Box, seed, estimate_samples);
        j["estimates"] = {
            {"sigma_product_constant", c7.value},
            {"kth_entry_constant", c22.value},
            {"box_accept_rate", c7.stats.rate()},
        };
    }
    return finish("cone-check", std::move(j), json_path, violations, timer);
}

int cmd_lift_check(int n, int k, int m, std::uint64_t samples, std::uint64_t seed,
                   const std::string& csv_path, const std::string& json_path) {
    Timer timer;
    if (m >= k) throw ConfigError("lift-check: need m < k");
    CsvWriter csv(csv_path);
    csv.header({"sample", "lift_residual", "divided_diff_residual",
                "grad_min", "violation"});
    std::uint64_t violations = 0;
    double worst_lift = 0.0;
    for (std::uint64_t idx = 0; idx < samples; ++idx) {
        SplitMix64 rng = per_sample(seed, idx);
        Vec y(m);
        for (int i = 0; i < m; ++i) y[i] = rng.uniform(-2.0, 3.0);
        const auto op = m ? HessianSumSpec::from_roots(n, k, y)
                          : HessianSumSpec::pure(n, k);
        Vec lam(n);
        for (int i = 0; i < n; ++i) lam[i] = rng.uniform(-3.0, 5.0);
        const Spectrum spec(lam);

        const Vec lam_table = sigma_table_raw(lam, k);
        const Vec hat_table = sigma_table_raw(op.lifted(spec), k);
        double lift_res = 0.0;
        for (int l = 1; l <= k; ++l) {
            double direct = lam_table[l];
            for (int s = 1; s <= std::min(m, l); ++s)
                direct += op.b()[s - 1] * lam_table[l - s];
            lift_res = std::max(lift_res, std::abs(hat_table[l] - direct) /
                                              (1.0 + std::abs(hat_table[l])));
        }
        const Vec g = F_grad(spec, op);
        const Mat h = F_hess(spec, op);
        double dd_res = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q)
                dd_res = std::max(dd_res,
                    std::abs((g[p] - g[q]) + (lam[p] - lam[q]) * h(p, q)) /
                        std::max({1.0, std::abs(g[p]), std::abs(g[q])}));

        // ellipticity applies on the admissible set only
        double grad_min = std::numeric_limits<double>::infinity();
        if (admissible_condition1(spec, op)) grad_min = g.minCoeff();

        const bool bad = lift_res > 1e-10 || dd_res > 1e-12 ||
                         (std::isfinite(grad_min) && grad_min < -1e-12);
        violations += bad;
        worst_lift = std::max(worst_lift, lift_res);
        csv.row({std::to_string(idx), fmt17(lift_res), fmt17(dd_res),
                 std::isfinite(grad_min) ? fmt17(grad_min) : "inadmissible",
                 bad ? "1" : "0"});
    }
    OrderedJson j;
    j["config"] = {{"n", n}, {"k", k}, {"m", m}, {"samples", samples},
                   {"seed", seed}};
    j["worst_lift_residual"] = worst_lift;
    return finish("lift-check", std::move(j), json_path, violations, timer);
}

int cmd_quotient_check(int n, int k, std::uint64_t samples, std::uint64_t seed,
                       const std::string& csv_path, const std::string& json_path) {
    Timer timer;
    CsvWriter csv(csv_path);
    csv.header({"sample", "q2_identity_residual", "recursion_margin",
                "hessian_max_eig", "violation"});
    std::uint64_t violations = 0, accepted = 0;
    for (std::uint64_t idx = 0; accepted < samples; ++idx) {
        if (idx > samples * 1000 + 1000)
            throw ConfigError("quotient-check: acceptance rate too low");
        auto xs = sample_gamma_k(n, k, ConeSampler::OrthantPerturbed, seed, idx);
        if (!xs) continue;
        ++accepted;
        SplitMix64 rng = per_sample_direction(seed, idx);
        CVec xi(n);
        for (int i = 0; i < n; ++i) xi[i] = Complex(rng.normal(), rng.normal());
        const double dir_scale = 1.0 + xi.squaredNorm();

        const double q2res = q2_identity_residual(*xs, xi);
        double rec = 0.0;
        if (k >= 2) rec = quotient_recursion_margin(*xs, k - 1, xi);
        Eigen::SelfAdjointEigenSolver<Mat> es(quotient_hessian(*xs, std::max(k, 2)));
        const double max_eig = es.eigenvalues().maxCoeff();
        const double h_scale =
            std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());

        const bool bad = q2res > 1e-10 * dir_scale ||
                         rec < -1e-10 * dir_scale ||
                         max_eig > 1e-10 * h_scale;
        violations += bad;
        csv.row({std::to_string(idx), fmt17(q2res), fmt17(rec), fmt17(max_eig),
                 bad ? "1" : "0"});
    }
    OrderedJson j;
    j["config"] = {{"n", n}, {"k", k}, {"samples", samples}, {"seed", seed}};
    return finish("quotient-check", std::move(j), json_path, violations, timer);
}

void write_margin_csv(CsvWriter& csv, const std::vector<MarginReport>& reports,
                      int n) {
    std::vector<std::string> head{"sample", "min_margin", "sigma_level",
                                  "lambda1", "psh_margin", "feasible", "resorted"};
    for (int i = 0; i < n; ++i) head.push_back("spectrum" + std::to_string(i + 1));
    for (int i = 0; i < n; ++i) head.push_back("minimizer" + std::to_string(i + 1));
    csv.header(head);
    for (const auto& r : reports) {
        std::vector<std::string> row{std::to_string(r.sample_index),
                                     fmt17(r.min_margin), fmt17(r.sigma_level),
                                     fmt17(r.lambda1), fmt17(r.psh_margin),
                                     r.feasible ? "1" : "0",
                                     r.resorted ? "1" : "0"};
        for (int i = 0; i < n; ++i) row.push_back(fmt17(r.lambda[i]));
        for (int i = 0; i < n; ++i) row.push_back(fmt17(r.minimizer[i]));
        csv.row(row);
    }
}

int cmd_concavity_sweep(int n, int k, const std::vector<double>& b, double gamma,
                        double delta, double l1lo, double l1hi, double level,
                        std::uint64_t samples, std::uint64_t seed, unsigned threads,
                        const std::string& csv_path, const std::string& json_path) {
    Timer timer;
    const auto op = b.empty() ? HessianSumSpec::pure(n, k)
                              : HessianSumSpec::from_coefficients(n, k, parse_reals(b));
    ConcavityParams params(gamma, delta, op);
    SweepConfig cfg;
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.lambda1_min = l1lo;
    cfg.lambda1_max = l1hi;
    cfg.sigma_level = level;
    cfg.threads = threads;
    const SweepResult res = concavity_sweep(cfg, params);

    CsvWriter csv(csv_path);
    write_margin_csv(csv, res.reports, n);

    OrderedJson j;
    j["config"] = {{"n", n}, {"k", k}, {"b", b}, {"gamma", gamma},
                   {"delta", delta}, {"lambda1_min", l1lo}, {"lambda1_max", l1hi},
                   {"sigma_level", level}, {"samples", samples}, {"seed", seed}};
    j["attempts"] = res.attempts;
    j["rejects"] = res.rejects;
    j["global_min_margin"] = res.global_min;
    if (!res.reports.empty()) {
        const auto worst = std::min_element(
            res.reports.begin(), res.reports.end(),
            [](const auto& a, const auto& c) { return a.min_margin < c.min_margin; });
        j["worst_witness"] = {{"sample", worst->sample_index},
                              {"lambda", vec_str(worst->lambda)},
                              {"min_margin", worst->min_margin}};
    }
    return finish("concavity-sweep", std::move(j), json_path, res.violations, timer);
}

int cmd_concavity_min(const std::vector<double>& lambda, int k,
                      const std::vector<double>& b, double gamma, double delta,
                      const std::string& json_path) {
    Timer timer;
    Vec lam = parse_reals(lambda);
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    const int n = static_cast<int>(lam.size());
    const auto op = b.empty() ? HessianSumSpec::pure(n, k)
                              : HessianSumSpec::from_coefficients(n, k, parse_reals(b));
    const MarginReport rep = min_margin(Spectrum(lam, true),
                                        ConcavityParams(gamma, delta, op));
    OrderedJson j;
    j["config"] = {{"lambda", lambda}, {"k", k}, {"b", b}, {"gamma", gamma},
                   {"delta", delta}};
    j["min_margin"] = rep.min_margin;
    j["sigma_level"] = rep.sigma_level;
    j["psh_margin"] = rep.psh_margin;
    j["minimizer"] = vec_str(rep.minimizer);
    std::printf("min_margin = %s\n", fmt17(rep.min_margin).c_str());
    return finish("concavity-min", std::move(j), json_path,
                  rep.min_margin < 0.0 ? 1 : 0, timer);
}

int cmd_threshold_scan(int n, int k, double gamma,
                       const std::vector<double>& deltas,
                       const std::vector<double>& lambda1s,
                       std::uint64_t per_cell, std::uint64_t seed,
                       const std::string& csv_path, const std::string& json_path) {
    Timer timer;
    const auto table = threshold_scan(deltas, lambda1s, per_cell, seed, gamma,
                                      HessianSumSpec::pure(n, k));
    CsvWriter csv(csv_path);
    csv.header({"delta", "lambda1", "worst_margin", "violations", "samples"});
    for (const auto& cell : table)
        csv.row({fmt17(cell.delta), fmt17(cell.lambda1), fmt17(cell.worst_margin),
                 std::to_string(cell.violations), std::to_string(cell.samples)});
    OrderedJson j;
    j["config"] = {{"n", n}, {"k", k}, {"gamma", gamma}, {"deltas", deltas},
                   {"lambda1s", lambda1s}, {"samples_per_cell", per_cell},
                   {"seed", seed}};
    j["cells"] = table.size();
    // observational command: never asserts
    return finish("threshold-scan", std::move(j), json_path, 0, timer);
}

int cmd_claims_report(int n, int k, std::uint64_t samples, std::uint64_t seed,
                      double delta, const std::string& csv_path,
                      const std::string& json_path) {
    Timer timer;
    CsvWriter csv(csv_path);
    std::vector<std::string> head{"sample", "r1", "r2", "r3", "r1_unbounded", "ell"};
    for (int i = 0; i < n; ++i) head.push_back("lambda" + std::to_string(i + 1));
    csv.header(head);

    std::uint64_t hits = 0, tried = 0;
    double r3lo = std::numeric_limits<double>::infinity(), r3hi = 0.0;
    for (std::uint64_t idx = 0; hits < samples; ++idx, ++tried) {
        if (tried > samples * 100000 + 100000)
            throw ConfigError("claims-report: predicate acceptance too low");
        SplitMix64 rng = per_sample(seed, idx);
        Vec lam(n);
        lam[0] = 1.0;
        for (int i = 1; i < n; ++i) lam[i] = rng.uniform(-0.08, 0.25);
        std::sort(lam.begin() + 1, lam.end(), std::greater<double>());
        if (lam[1] > 1.0) continue;
        Spectrum s(lam, true);
        if (!in_gamma_k(s, k).inside) continue;
        if (!top_exclusion_dominates(s, k)) continue;
        ++hits;
        const RatioReport rr = regime_ratios(s, k, delta);
        if (!rr.r1_unbounded) {
            r3lo = std::min(r3lo, rr.r3);
            r3hi = std::max(r3hi, rr.r3);
        }
        std::vector<std::string> row{std::to_string(idx), fmt17(rr.r1),
                                     fmt17(rr.r2), fmt17(rr.r3),
                                     rr.r1_unbounded ? "1" : "0",
                                     std::to_string(rr.ell)};
        for (int i = 0; i < n; ++i) row.push_back(fmt17(lam[i]));
        csv.row(row);
    }
    OrderedJson j;
    j["config"] = {{"n", n}, {"k", k}, {"samples", samples}, {"seed", seed},
                   {"delta", delta}};
    j["tried"] = tried;
    j["r3_envelope"] = {r3lo, r3hi};
    // ratios are reported, not asserted
    return finish("claims-report", std::move(j), json_path, 0, timer);
}

int cmd_solve(const std::string& config_path) {
    Timer timer;
    const solver::TorusProblem prob = solver::parse_problem_file(config_path);
    const auto op = prob.make_operator();
    const auto chi = prob.make_chi();
    const solver::GridField psi = prob.make_psi();

    const solver::SolveResult res = solver::newton_solve(psi, op, chi, prob.newton);

    CsvWriter csv(prob.trace_path);
    csv.header({"iteration", "residual_sup", "step", "c", "lambda_max",
                "psh_margin_min", "lin_iters"});
    for (const auto& row : res.trace)
        csv.row({std::to_string(row.iter), fmt17(row.residual_sup),
                 fmt17(row.step), fmt17(row.c), fmt17(row.lambda_max),
                 fmt17(row.psh_margin_min), std::to_string(row.lin_iters)});

    // field dump: u, residual, lambda1, lambda2
    const solver::HermitianField g =
        solver::assemble_g(res.u, chi, prob.chi_eps);
    solver::GridField resid(prob.N), lam1(prob.N), lam2(prob.N);
    {
        solver::SolverState st{res.u, res.c, res.final_residual, true, 0.0};
        resid = solver::residual(st, psi, op, chi, prob.chi_eps, prob.delta).field;
        for (std::size_t p = 0; p < g.size(); ++p) {
            const solver::Eig2 e = solver::eig2(g[p]);
            lam1[p] = e.lam1;
            lam2[p] = e.lam2;
        }
    }
    solver::write_field_dump(prob.fields_path, prob.N,
                             {&res.u, &resid, &lam1, &lam2});

    const char* status_name[] = {"converged", "max_iterations",
                                 "cone_guard_exhausted", "linear_solve_stagnation"};
    OrderedJson j;
    j["subcommand"] = "solve";
    j["config_file"] = config_path;
    j["config"] = {{"N", prob.N}, {"k", prob.k}, {"m", prob.b.size()},
                   {"chi_scale", prob.chi_scale}, {"delta", prob.delta},
                   {"tol", prob.newton.tol}, {"seed", prob.seed}};
    j["status"] = status_name[static_cast<int>(res.status)];
    j["iterations"] = res.trace.size();
    j["final_residual"] = res.final_residual;
    j["c"] = res.c;
    j["abs_c_above_1e-6"] = std::abs(res.c) > 1e-6;  // compatibility-gap flag
    if (!res.trace.empty()) {
        j["lambda_max"] = res.trace.back().lambda_max;
        j["psh_margin_min"] = res.trace.back().psh_margin_min;
    }
    if (!res.detail.empty()) j["detail"] = res.detail;
    j["wall_ms"] = timer.ms();
    write_json(prob.summary_path, j);

    if (res.status != solver::SolveStatus::Converged) {
        std::fprintf(stderr, "solve: %s (%s)\n",
                     status_name[static_cast<int>(res.status)], res.detail.c_str());
        return 1;
    }
    std::printf("converged: residual %s, c = %s\n",
                fmt17(res.final_residual).c_str(), fmt17(res.c).c_str());
    return 0;
}

int cmd_diagnose(const std::string& config_path, const std::string& state,
                 double n_test, double k_test, const std::string& json_path) {
    Timer timer;
    const solver::TorusProblem prob = solver::parse_problem_file(config_path);
    const auto op = prob.make_operator();
    const auto chi = prob.make_chi();

    solver::GridField u(prob.N);
    if (state == "manufactured") {
        u = solver::manufactured_problem(prob.N, prob.amplitude, op, chi,
                                         prob.delta).u_star;
    } else if (state == "solved") {
        const solver::GridField psi = prob.make_psi();
        const auto res = solver::newton_solve_or_throw(psi, op, chi, prob.newton);
        u = res.u;
    } else if (state != "zero") {
        throw ConfigError("diagnose: state must be zero, manufactured, or solved");
    }

    const solver::HermitianField g = solver::assemble_g(u, chi, prob.chi_eps);
    const solver::DiagnosticReport rep =
        solver::diagnose(u, g, n_test, k_test, prob.delta);

    OrderedJson j;
    j["subcommand"] = "diagnose";
    j["config_file"] = config_path;
    j["state"] = state;
    j["n_test"] = n_test;
    j["k_test"] = k_test;
    j["lambda_max"] = rep.lambda_max;
    j["psh_margin_min"] = rep.psh_margin_min;
    j["monitor_max"] = rep.g_max;
    j["monitor_argmax"] = {rep.g_argmax[0], rep.g_argmax[1], rep.g_argmax[2],
                           rep.g_argmax[3]};
    j["du_sq_max"] = rep.du_sq_max;
    j["c1_norm"] = rep.c1_norm;
    j["sign_conditions_ok"] = rep.sign_conditions_ok;
    j["combined_min"] = rep.combined_min;
    j["wall_ms"] = timer.ms();
    write_json(json_path, j);
    std::printf("lambda_max = %s, psh_margin_min = %s, signs %s\n",
                fmt17(rep.lambda_max).c_str(), fmt17(rep.psh_margin_min).c_str(),
                rep.sign_conditions_ok ? "ok" : "VIOLATED");
    return rep.sign_conditions_ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symmetric-function calculus, cone tests, concavity margins, "
                 "and a periodic torus solver for sum-of-Hessian equations"};
    app.require_subcommand(1);

    // identities
    auto* sid = app.add_subcommand("identities",
                                   "Exclusion-identity residual sweep");
    int id_n = 6, id_k = 0;
    std::uint64_t id_samples = 1000, id_seed = 42;
    double id_tol = 1e-10;
    std::string id_csv = "identities.csv", id_json = "identities.json";
    sid->add_option("--n", id_n, "dimension")->check(CLI::Range(2, 16));
    sid->add_option("--k", id_k, "degree (0 = all)");
    sid->add_option("--samples", id_samples, "samples per (n,k)");
    sid->add_option("--seed", id_seed, "RNG seed");
    sid->add_option("--tol", id_tol, "relative residual tolerance");
    sid->add_option("--out-csv", id_csv, "CSV output path");
    sid->add_option("--out-json", id_json, "JSON summary path");

    // cone-check
    auto* sco = app.add_subcommand("cone-check", "Cone property sweep");
    int co_n = 5, co_k = 3;
    std::uint64_t co_samples = 10000, co_seed = 42, co_est = 0;
    std::string co_csv = "cone_check.csv", co_json = "cone_check.json";
    sco->add_option("--n", co_n)->check(CLI::Range(2, 12));
    sco->add_option("--k", co_k);
    sco->add_option("--samples", co_samples);
    sco->add_option("--seed", co_seed);
    sco->add_option("--estimate-samples", co_est,
                    "also estimate abstract constants (0 = skip)");
    sco->add_option("--out-csv", co_csv);
    sco->add_option("--out-json", co_json);

    // lift-check
    auto* sli = app.add_subcommand("lift-check",
                                   "Operator lift and divided-difference sweep");
    int li_n = 5, li_k = 3, li_m = 1;
    std::uint64_t li_samples = 10000, li_seed = 42;
    std::string li_csv = "lift_check.csv", li_json = "lift_check.json";
    sli->add_option("--n", li_n)->check(CLI::Range(2, 12));
    sli->add_option("--k", li_k);
    sli->add_option("--m", li_m);
    sli->add_option("--samples", li_samples);
    sli->add_option("--seed", li_seed);
    sli->add_option("--out-csv", li_csv);
    sli->add_option("--out-json", li_json);

    // quotient-check
    auto* squ = app.add_subcommand("quotient-check",
                                   "Newton-quotient identity and concavity sweep");
    int qu_n = 5, qu_k = 3;
    std::uint64_t qu_samples = 10000, qu_seed = 42;
    std::string qu_csv = "quotient_check.csv", qu_json = "quotient_check.json";
    squ->add_option("--n", qu_n)->check(CLI::Range(3, 12));
    squ->add_option("--k", qu_k);
    squ->add_option("--samples", qu_samples);
    squ->add_option("--seed", qu_seed);
    squ->add_option("--out-csv", qu_csv);
    squ->add_option("--out-json", qu_json);

    // concavity-sweep
    auto* ssw = app.add_subcommand("concavity-sweep",
                                   "Margin-matrix eigenvalue certification sweep");
    int sw_n = 3, sw_k = 2;
    std::vector<double> sw_b;
    double sw_gamma = 0.5, sw_delta = 1e-3, sw_level = 1.0;
    std::string sw_l1 = "1e3:1e6";
    std::uint64_t sw_samples = 10000, sw_seed = 42;
    unsigned sw_threads = 0;
    std::string sw_csv = "concavity_sweep.csv", sw_json = "concavity_sweep.json";
    ssw->add_option("--n", sw_n)->check(CLI::Range(3, 16));
    ssw->add_option("--k", sw_k);
    ssw->add_option("--b", sw_b, "lower-order coefficients (m < k)");
    ssw->add_option("--gamma", sw_gamma);
    ssw->add_option("--delta", sw_delta);
    ssw->add_option("--lambda1", sw_l1, "log-uniform range lo:hi");
    ssw->add_option("--sigma-level", sw_level);
    ssw->add_option("--samples", sw_samples);
    ssw->add_option("--seed", sw_seed);
    ssw->add_option("--threads", sw_threads);
    ssw->add_option("--out-csv", sw_csv);
    ssw->add_option("--out-json", sw_json);

    // concavity-min
    auto* smi = app.add_subcommand("concavity-min",
                                   "Single-spectrum margin certificate");
    std::vector<double> mi_lambda, mi_b;
    int mi_k = 2;
    double mi_gamma = 0.5, mi_delta = 1e-3;
    std::string mi_json = "concavity_min.json";
    smi->add_option("--lambda", mi_lambda, "eigenvalues")->required();
    smi->add_option("--k", mi_k);
    smi->add_option("--b", mi_b);
    smi->add_option("--gamma", mi_gamma);
    smi->add_option("--delta", mi_delta);
    smi->add_option("--out-json", mi_json);

    // threshold-scan
    auto* sth = app.add_subcommand("threshold-scan",
                                   "Worst margin over a (delta, lambda1) grid");
    int th_n = 3, th_k = 2;
    double th_gamma = 0.5;
    std::vector<double> th_deltas{1e-4, 1e-3, 1e-2, 1e-1};
    std::vector<double> th_lambda1s{1e3, 1e4, 1e5, 1e6};
    std::uint64_t th_cell = 500, th_seed = 42;
    std::string th_csv = "threshold_scan.csv", th_json = "threshold_scan.json";
    sth->add_option("--n", th_n)->check(CLI::Range(3, 16));
    sth->add_option("--k", th_k);
    sth->add_option("--gamma", th_gamma);
    sth->add_option("--deltas", th_deltas);
    sth->add_option("--lambda1s", th_lambda1s);
    sth->add_option("--samples-per-cell", th_cell);
    sth->add_option("--seed", th_seed);
    sth->add_option("--out-csv", th_csv);
    sth->add_option("--out-json", th_json);

    // claims-report
    auto* scl = app.add_subcommand("claims-report",
                                   "Ratio diagnostics in the degenerate regime");
    int cl_n = 4, cl_k = 2;
    std::uint64_t cl_samples = 1000, cl_seed = 42;
    double cl_delta = 1e-3;
    std::string cl_csv = "claims_report.csv", cl_json = "claims_report.json";
    scl->add_option("--n", cl_n)->check(CLI::Range(3, 12));
    scl->add_option("--k", cl_k);
    scl->add_option("--samples", cl_samples);
    scl->add_option("--seed", cl_seed);
    scl->add_option("--delta", cl_delta);
    scl->add_option("--out-csv", cl_csv);
    scl->add_option("--out-json", cl_json);

    // solve
    auto* sso = app.add_subcommand("solve", "Newton solve of a problem file");
    std::string so_config;
    sso->add_option("--config", so_config, "problem file")->required();

    // diagnose
    auto* sdi = app.add_subcommand("diagnose",
                                   "A priori-quantity diagnostics of a state");
    std::string di_config, di_state = "manufactured";
    double di_ntest = 5.0, di_ktest = 50.0;
    std::string di_json = "diagnose.json";
    sdi->add_option("--config", di_config, "problem file")->required();
    sdi->add_option("--state", di_state, "zero | manufactured | solved");
    sdi->add_option("--n-test", di_ntest);
    sdi->add_option("--k-test", di_ktest);
    sdi->add_option("--out-json", di_json);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sid->parsed())
            return cmd_identities(id_n, id_k, id_samples, id_seed, id_tol, id_csv,
                                  id_json);
        if (sco->parsed())
            return cmd_cone_check(co_n, co_k, co_samples, co_seed, co_est, co_csv,
                                  co_json);
        if (sli->parsed())
            return cmd_lift_check(li_n, li_k, li_m, li_samples, li_seed, li_csv,
                                  li_json);
        if (squ->parsed())
            return cmd_quotient_check(qu_n, qu_k, qu_samples, qu_seed, qu_csv,
                                      qu_json);
        if (ssw->parsed()) {
            const auto colon = sw_l1.find(':');
            if (colon == std::string::npos)
                throw ConfigError("--lambda1 expects lo:hi");
            const double lo = std::stod(sw_l1.substr(0, colon));
            const double hi = std::stod(sw_l1.substr(colon + 1));
            return cmd_concavity_sweep(sw_n, sw_k, sw_b, sw_gamma, sw_delta, lo, hi,
                                       sw_level, sw_samples, sw_seed, sw_threads,
                                       sw_csv, sw_json);
        }
        if (smi->parsed())
            return cmd_concavity_min(mi_lambda, mi_k, mi_b, mi_gamma, mi_delta,
                                     mi_json);
        if (sth->parsed())
            return cmd_threshold_scan(th_n, th_k, th_gamma, th_deltas, th_lambda1s,
                                      th_cell, th_seed, th_csv, th_json);
        if (scl->parsed())
            return cmd_claims_report(cl_n, cl_k, cl_samples, cl_seed, cl_delta,
                                     cl_csv, cl_json);
        if (sso->parsed()) return cmd_solve(so_config);
        if (sdi->parsed())
            return cmd_diagnose(di_config, di_state, di_ntest, di_ktest, di_json);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const PreconditionError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
