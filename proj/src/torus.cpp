#include "sumhess/solver/torus.hpp"

#include "sumhess/rng.hpp"
#include "sumhess/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <numbers>
#include <sstream>

namespace sumhess::solver {

namespace {

// sigma_0..K of a short vector on the stack (K, len <= 8)
inline void small_sigmas(const double* v, int len, int K, double* out) {
    for (int j = 1; j <= K; ++j) out[j] = 0.0;
    out[0] = 1.0;
    for (int i = 0; i < len; ++i)
        for (int j = std::min(i + 1, K); j >= 1; --j)
            out[j] += v[i] * out[j - 1];
}

struct PointOp {
    // lifted vector (lam1, lam2, y...) workspace and operator shape
    int k;
    int mlift;       // 2 + m
    double yv[6];
    explicit PointOp(const HessianSumSpec& op) : k(op.k()), mlift(2 + op.m()) {
        for (int s = 0; s < op.m(); ++s) yv[s] = op.y()[s];
    }
    double value(double l1, double l2) const {
        double hat[8];
        hat[0] = l1; hat[1] = l2;
        for (int s = 0; s < mlift - 2; ++s) hat[2 + s] = yv[s];
        double sig[9];
        small_sigmas(hat, mlift, k, sig);
        return sig[k];
    }
    bool admissible(double l1, double l2, double delta) const {
        if (!(l2 + delta * l1 > 0.0)) return false;
        double hat[8];
        hat[0] = l1; hat[1] = l2;
        for (int s = 0; s < mlift - 2; ++s) hat[2 + s] = yv[s];
        double sig[9];
        small_sigmas(hat, mlift, k, sig);
        for (int j = 1; j <= k; ++j)
            if (!(sig[j] > 0.0)) return false;
        return true;
    }
    // F_1 = sigma_{k-1} of the lift without slot 0, F_2 without slot 1
    void grads(double l1, double l2, double& f1, double& f2) const {
        double red[8];
        double sig[9];
        red[0] = l2;
        for (int s = 0; s < mlift - 2; ++s) red[1 + s] = yv[s];
        small_sigmas(red, mlift - 1, k - 1, sig);
        f1 = sig[k - 1];
        red[0] = l1;
        small_sigmas(red, mlift - 1, k - 1, sig);
        f2 = sig[k - 1];
    }
};

inline double chi_min_eig(const Herm2& chi) {
    const double mid = 0.5 * (chi.a + chi.d);
    return mid - std::hypot(0.5 * (chi.a - chi.d), std::abs(chi.b));
}

} // namespace

HermitianField complex_hessian(const GridField& u) {
    const int N = u.N();
    HermitianField out(N);
    const double h = u.h();
    const double inv4h2 = 1.0 / (4.0 * h * h);
    const double inv16h2 = 1.0 / (16.0 * h * h);

    std::vector<int> ip(N), im(N);
    for (int i = 0; i < N; ++i) {
        ip[i] = (i + 1) % N;
        im[i] = (i + N - 1) % N;
    }

    parallel_for(N, [&](std::size_t i0z) {
        const int i0 = static_cast<int>(i0z);
        for (int i1 = 0; i1 < N; ++i1)
            for (int i2 = 0; i2 < N; ++i2)
                for (int i3 = 0; i3 < N; ++i3) {
                    const double u0 = u.at(i0, i1, i2, i3);
                    const double dxx1 = u.at(ip[i0], i1, i2, i3) - 2.0 * u0 +
                                        u.at(im[i0], i1, i2, i3);
                    const double dyy1 = u.at(i0, ip[i1], i2, i3) - 2.0 * u0 +
                                        u.at(i0, im[i1], i2, i3);
                    const double dxx2 = u.at(i0, i1, ip[i2], i3) - 2.0 * u0 +
                                        u.at(i0, i1, im[i2], i3);
                    const double dyy2 = u.at(i0, i1, i2, ip[i3]) - 2.0 * u0 +
                                        u.at(i0, i1, i2, im[i3]);
                    // mixed numerators over axis pairs (x1,x2), (y1,y2),
                    // (x1,y2), (y1,x2)
                    const double m02 =
                        u.at(ip[i0], i1, ip[i2], i3) - u.at(ip[i0], i1, im[i2], i3) -
                        u.at(im[i0], i1, ip[i2], i3) + u.at(im[i0], i1, im[i2], i3);
                    const double m13 =
                        u.at(i0, ip[i1], i2, ip[i3]) - u.at(i0, ip[i1], i2, im[i3]) -
                        u.at(i0, im[i1], i2, ip[i3]) + u.at(i0, im[i1], i2, im[i3]);
                    const double m03 =
                        u.at(ip[i0], i1, i2, ip[i3]) - u.at(ip[i0], i1, i2, im[i3]) -
                        u.at(im[i0], i1, i2, ip[i3]) + u.at(im[i0], i1, i2, im[i3]);
                    const double m12 =
                        u.at(i0, ip[i1], ip[i2], i3) - u.at(i0, ip[i1], im[i2], i3) -
                        u.at(i0, im[i1], ip[i2], i3) + u.at(i0, im[i1], im[i2], i3);

                    Herm2& g = out[u.flat(i0, i1, i2, i3)];
                    g.a = (dxx1 + dyy1) * inv4h2;
                    g.d = (dxx2 + dyy2) * inv4h2;
                    g.b = Complex((m02 + m13) * inv16h2, (m03 - m12) * inv16h2);
                }
    });
    return out;
}

HermitianField assemble_g(const GridField& u, const Herm2& chi, double eps) {
    if (!(eps > 0.0))
        throw PreconditionError("assemble_g: eps must be positive");
    if (chi_min_eig(chi) < eps)
        throw ChiNotUniformlyPositive("assemble_g: chi below eps * identity");
    HermitianField g = complex_hessian(u);
    for (std::size_t p = 0; p < g.size(); ++p) {
        g[p].a += chi.a;
        g[p].d += chi.d;
        g[p].b += chi.b;
    }
    return g;
}

HermitianField assemble_g(const GridField& u, const HermitianField& chi, double eps) {
    if (!(eps > 0.0))
        throw PreconditionError("assemble_g: eps must be positive");
    if (chi.N() != u.N())
        throw PreconditionError("assemble_g: chi grid mismatch");
    for (std::size_t p = 0; p < chi.size(); ++p)
        if (chi_min_eig(chi[p]) < eps)
            throw ChiNotUniformlyPositive("assemble_g: chi below eps * identity");
    HermitianField g = complex_hessian(u);
    for (std::size_t p = 0; p < g.size(); ++p) {
        g[p].a += chi[p].a;
        g[p].d += chi[p].d;
        g[p].b += chi[p].b;
    }
    return g;
}

std::optional<std::size_t> first_inadmissible_point(const HermitianField& g,
                                                    const HessianSumSpec& op,
                                                    double delta) {
    const PointOp pop(op);
    for (std::size_t p = 0; p < g.size(); ++p) {
        const Eig2 e = eig2(g[p]);
        if (!pop.admissible(e.lam1, e.lam2, delta)) return p;
    }
    return std::nullopt;
}

ResidualResult residual(const SolverState& state, const GridField& psi,
                        const HessianSumSpec& op, const Herm2& chi, double chi_eps,
                        double delta) {
    if (psi.N() != state.u.N())
        throw PreconditionError("residual: psi grid mismatch");
    for (std::size_t p = 0; p < psi.size(); ++p)
        if (!(psi[p] > 0.0))
            throw PreconditionError("residual: psi must be strictly positive");

    const HermitianField g = assemble_g(state.u, chi, chi_eps);
    if (auto bad = first_inadmissible_point(g, op, delta)) {
        std::ostringstream msg;
        const auto idx = state.u.unflat(*bad);
        msg << "residual: grid point (" << idx[0] << "," << idx[1] << ","
            << idx[2] << "," << idx[3] << ") left the admissible set";
        throw InadmissiblePoint(msg.str(), static_cast<long>(*bad));
    }

    const PointOp pop(op);
    const double ec = std::exp(state.c);
    ResidualResult out{GridField(state.u.N()), state.u.mean()};
    parallel_for(psi.size(), [&](std::size_t p) {
        const Eig2 e = eig2(g[p]);
        out.field[p] = pop.value(e.lam1, e.lam2) - psi[p] * ec;
    }, 0);
    return out;
}

LinearizedOperator linearize(const HermitianField& g, const HessianSumSpec& op) {
    LinearizedOperator lin;
    lin.N = g.N();
    lin.w11.resize(g.size());
    lin.w22.resize(g.size());
    lin.w12.resize(g.size());
    const PointOp pop(op);
    parallel_for(g.size(), [&](std::size_t p) {
        const Eig2 e = eig2(g[p]);
        double f1, f2;
        pop.grads(e.lam1, e.lam2, f1, f2);
        // W = f1 u1 u1^* + f2 u2 u2^*
        lin.w11[p] = f1 * std::norm(e.u11) + f2 * std::norm(e.u12);
        lin.w22[p] = f1 * std::norm(e.u21) + f2 * std::norm(e.u22);
        lin.w12[p] = f1 * e.u11 * std::conj(e.u21) + f2 * e.u12 * std::conj(e.u22);
    });
    return lin;
}

GridField LinearizedOperator::apply(const GridField& v, unsigned threads) const {
    GridField out(v.N());
    const double h = v.h();
    const double inv4h2 = 1.0 / (4.0 * h * h);
    const double inv16h2 = 1.0 / (16.0 * h * h);
    const int n = v.N();

    std::vector<int> ip(n), im(n);
    for (int i = 0; i < n; ++i) {
        ip[i] = (i + 1) % n;
        im[i] = (i + n - 1) % n;
    }

    parallel_for(n, [&](std::size_t i0z) {
        const int i0 = static_cast<int>(i0z);
        for (int i1 = 0; i1 < n; ++i1)
            for (int i2 = 0; i2 < n; ++i2)
                for (int i3 = 0; i3 < n; ++i3) {
                    const double u0 = v.at(i0, i1, i2, i3);
                    const double dxx1 = v.at(ip[i0], i1, i2, i3) - 2.0 * u0 +
                                        v.at(im[i0], i1, i2, i3);
                    const double dyy1 = v.at(i0, ip[i1], i2, i3) - 2.0 * u0 +
                                        v.at(i0, im[i1], i2, i3);
                    const double dxx2 = v.at(i0, i1, ip[i2], i3) - 2.0 * u0 +
                                        v.at(i0, i1, im[i2], i3);
                    const double dyy2 = v.at(i0, i1, i2, ip[i3]) - 2.0 * u0 +
                                        v.at(i0, i1, i2, im[i3]);
                    const double m02 =
                        v.at(ip[i0], i1, ip[i2], i3) - v.at(ip[i0], i1, im[i2], i3) -
                        v.at(im[i0], i1, ip[i2], i3) + v.at(im[i0], i1, im[i2], i3);
                    const double m13 =
                        v.at(i0, ip[i1], i2, ip[i3]) - v.at(i0, ip[i1], i2, im[i3]) -
                        v.at(i0, im[i1], i2, ip[i3]) + v.at(i0, im[i1], i2, im[i3]);
                    const double m03 =
                        v.at(ip[i0], i1, i2, ip[i3]) - v.at(ip[i0], i1, i2, im[i3]) -
                        v.at(im[i0], i1, i2, ip[i3]) + v.at(im[i0], i1, i2, im[i3]);
                    const double m12 =
                        v.at(i0, ip[i1], ip[i2], i3) - v.at(i0, ip[i1], im[i2], i3) -
                        v.at(i0, im[i1], ip[i2], i3) + v.at(i0, im[i1], im[i2], i3);

                    const double e11 = (dxx1 + dyy1) * inv4h2;
                    const double e22 = (dxx2 + dyy2) * inv4h2;
                    const Complex e12((m02 + m13) * inv16h2, (m03 - m12) * inv16h2);

                    const std::size_t p = v.flat(i0, i1, i2, i3);
                    out[p] = w11[p] * e11 + w22[p] * e22 +
                             2.0 * (w12[p] * std::conj(e12)).real();
                }
    }, threads);
    return out;
}

double LinearizedOperator::diag(std::size_t p) const {
    const double h = 2.0 * std::numbers::pi / N;
    return -(w11[p] + w22[p]) / (h * h);
}

namespace {

struct Bordered {
    const LinearizedOperator* lin;
    const GridField* psi;
    double ec;         // psi e^c coefficient of the c-column
    unsigned threads;

    // w = (v, d) -> (L v - psi e^c d, mean(v))
    void apply(const std::vector<double>& w, std::vector<double>& out) const {
        const std::size_t M = w.size() - 1;
        GridField v(lin->N);
        std::copy(w.begin(), w.begin() + M, v.data().begin());
        GridField Lv = lin->apply(v, threads);
        const double d = w[M];
        for (std::size_t p = 0; p < M; ++p)
            out[p] = Lv[p] - (*psi)[p] * ec * d;
        out[M] = det_sum(v.data()) / static_cast<double>(M);
    }
};

double vec_norm(const std::vector<double>& v) {
    return std::sqrt(det_dot(v, v));
}

// Jacobi-preconditioned BiCGStab; returns iterations used, or -1 on
// stagnation / breakdown. The shadow vector is a fixed pseudo-random
// vector (a shadow equal to the residual breaks down on the bordered
// system whenever the residual is constant in the field slots).
int bicgstab(const Bordered& A, const std::vector<double>& rhs,
             std::vector<double>& x, double rtol, int max_iter) {
    const std::size_t M = rhs.size();
    std::vector<double> pre(M);
    for (std::size_t p = 0; p + 1 < M; ++p) {
        const double d = A.lin->diag(p);
        pre[p] = (std::abs(d) > 1e-300) ? 1.0 / d : 1.0;
    }
    pre[M - 1] = 1.0;

    std::vector<double> r(M), r0(M), pvec(M), v(M), s(M), t(M), tmp(M);
    std::fill(x.begin(), x.end(), 0.0);
    const double rhs_norm = vec_norm(rhs);
    if (rhs_norm == 0.0) return 0;

    int used = 0;
    for (std::uint64_t attempt = 0; attempt < 2; ++attempt) {
        r = rhs;
        if (used > 0) {  // restart from the current iterate
            A.apply(x, tmp);
            for (std::size_t i = 0; i < M; ++i) r[i] = rhs[i] - tmp[i];
        }
        SplitMix64 shadow(0xB1C657AB5EEDull + attempt);
        for (std::size_t i = 0; i < M; ++i) r0[i] = shadow.uniform(-1.0, 1.0);
        std::fill(pvec.begin(), pvec.end(), 0.0);
        std::fill(v.begin(), v.end(), 0.0);

        double rho = 1.0, alpha = 1.0, omega = 1.0;
        double best = vec_norm(r);
        int since_best = 0;

        for (; used < max_iter;) {
            ++used;
            const double rho_new = det_dot(r0, r);
            if (std::abs(rho_new) < 1e-300) break;
            const double beta = (rho_new / rho) * (alpha / omega);
            rho = rho_new;
            for (std::size_t i = 0; i < M; ++i)
                pvec[i] = r[i] + beta * (pvec[i] - omega * v[i]);
            for (std::size_t i = 0; i < M; ++i) tmp[i] = pre[i] * pvec[i];
            A.apply(tmp, v);
            const double r0v = det_dot(r0, v);
            if (std::abs(r0v) < 1e-300) break;
            alpha = rho / r0v;
            for (std::size_t i = 0; i < M; ++i) s[i] = r[i] - alpha * v[i];
            if (vec_norm(s) <= rtol * rhs_norm) {
                for (std::size_t i = 0; i < M; ++i) x[i] += alpha * pre[i] * pvec[i];
                return used;
            }
            for (std::size_t i = 0; i < M; ++i) tmp[i] = pre[i] * s[i];
            A.apply(tmp, t);
            const double tt = det_dot(t, t);
            if (tt < 1e-300) break;
            omega = det_dot(t, s) / tt;
            for (std::size_t i = 0; i < M; ++i)
                x[i] += alpha * pre[i] * pvec[i] + omega * pre[i] * s[i];
            for (std::size_t i = 0; i < M; ++i) r[i] = s[i] - omega * t[i];
            const double rn = vec_norm(r);
            if (rn <= rtol * rhs_norm) return used;
            if (rn < 0.999 * best) {
                best = rn;
                since_best = 0;
            } else if (++since_best > 150) {
                return -1;
            }
        }
        if (used >= max_iter) return -1;
    }
    return -1;
}

struct GridScan {
    double lambda_max;
    double psh_min;
};

GridScan scan_eigs(const HermitianField& g, double delta) {
    GridScan s{-std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity()};
    for (std::size_t p = 0; p < g.size(); ++p) {
        const Eig2 e = eig2(g[p]);
        s.lambda_max = std::max(s.lambda_max, e.lam1);
        s.psh_min = std::min(s.psh_min, e.lam2 + delta * e.lam1);
    }
    return s;
}

} // namespace

SolveResult newton_solve(const GridField& psi, const HessianSumSpec& op,
                         const Herm2& chi, const NewtonConfig& cfg) {
    const int N = psi.N();
    for (std::size_t p = 0; p < psi.size(); ++p)
        if (!(psi[p] > 0.0))
            throw PreconditionError("newton_solve: psi must be strictly positive");

    SolveResult res{SolveStatus::MaxIterations, GridField(N), 0.0, {}, 0.0, ""};
    GridField u(N);
    double c = 0.0;
    const PointOp pop(op);
    double last_step = 0.0;
    int last_lin = 0;

    for (int iter = 0; iter < cfg.max_iter; ++iter) {
        HermitianField g = assemble_g(u, chi, cfg.chi_eps);
        if (auto bad = first_inadmissible_point(g, op, cfg.delta)) {
            const auto idx = u.unflat(*bad);
            std::ostringstream msg;
            msg << "initial state inadmissible at (" << idx[0] << "," << idx[1]
                << "," << idx[2] << "," << idx[3] << ")";
            throw InadmissiblePoint(msg.str(), static_cast<long>(*bad));
        }

        const double ec = std::exp(c);
        GridField r(N);
        parallel_for(psi.size(), [&](std::size_t p) {
            const Eig2 e = eig2(g[p]);
            r[p] = pop.value(e.lam1, e.lam2) - psi[p] * ec;
        }, cfg.threads);
        const double rsup = r.sup_norm();
        const GridScan scan = scan_eigs(g, cfg.delta);
        res.trace.push_back({iter, rsup, last_step, c, scan.lambda_max,
                             scan.psh_min, last_lin});

        if (rsup <= cfg.tol) {
            res.status = SolveStatus::Converged;
            res.u = u;
            res.c = c;
            res.final_residual = rsup;
            return res;
        }

        const LinearizedOperator lin = linearize(g, op);
        const std::size_t M = psi.size() + 1;
        std::vector<double> rhs(M), sol(M);
        for (std::size_t p = 0; p + 1 < M; ++p) rhs[p] = -r[p];
        rhs[M - 1] = -u.mean();
        Bordered A{&lin, &psi, ec, cfg.threads};
        const int lin_iters = bicgstab(A, rhs, sol, cfg.lin_tol, cfg.lin_max_iter);
        if (lin_iters < 0) {
            res.status = SolveStatus::LinearSolveStagnation;
            res.u = u;
            res.c = c;
            res.final_residual = rsup;
            res.detail = "linear solver stagnated";
            return res;
        }
        last_lin = lin_iters;

        GridField du(N);
        std::copy(sol.begin(), sol.end() - 1, du.data().begin());
        const double dc = sol[M - 1];

        // step halving until admissible and decreasing
        double alpha = 1.0;
        bool accepted = false;
        std::string guard_note;
        for (int hv = 0; hv <= cfg.max_halvings; ++hv) {
            GridField ut(N);
            for (std::size_t p = 0; p < ut.size(); ++p)
                ut[p] = u[p] + alpha * du[p];
            const double ct = c + alpha * dc;
            HermitianField gt = assemble_g(ut, chi, cfg.chi_eps);
            if (auto bad = first_inadmissible_point(gt, op, cfg.delta)) {
                const auto idx = ut.unflat(*bad);
                std::ostringstream msg;
                msg << "cone guard hit at (" << idx[0] << "," << idx[1] << ","
                    << idx[2] << "," << idx[3] << "), step " << alpha;
                guard_note = msg.str();
                alpha *= 0.5;
                continue;
            }
            const double ect = std::exp(ct);
            GridField rt(N);
            parallel_for(psi.size(), [&](std::size_t p) {
                const Eig2 e = eig2(gt[p]);
                rt[p] = pop.value(e.lam1, e.lam2) - psi[p] * ect;
            }, cfg.threads);
            if (rt.sup_norm() < rsup) {
                u = std::move(ut);
                u.subtract_mean();
                c = ct;
                accepted = true;
                last_step = alpha;
                break;
            }
            guard_note = "no residual decrease at step " + std::to_string(alpha);
            alpha *= 0.5;
        }
        if (!accepted) {
            res.status = SolveStatus::ConeGuardExhausted;
            res.u = u;
            res.c = c;
            res.final_residual = rsup;
            res.detail = guard_note;
            return res;
        }
    }

    res.status = SolveStatus::MaxIterations;
    res.u = u;
    res.c = c;
    res.final_residual = res.trace.empty() ? 0.0 : res.trace.back().residual_sup;
    res.detail = "iteration budget exhausted";
    return res;
}

SolveResult newton_solve_or_throw(const GridField& psi, const HessianSumSpec& op,
                                  const Herm2& chi, const NewtonConfig& cfg) {
    SolveResult res = newton_solve(psi, op, chi, cfg);
    switch (res.status) {
        case SolveStatus::Converged: return res;
        case SolveStatus::ConeGuardExhausted:
            throw ConeGuardExhausted("newton_solve: " + res.detail);
        case SolveStatus::LinearSolveStagnation:
            throw LinearSolveStagnation("newton_solve: " + res.detail);
        case SolveStatus::MaxIterations:
            throw MaxIterations("newton_solve: " + res.detail);
    }
    return res;
}

ManufacturedProblem manufactured_problem(int N, double amplitude,
                                         const HessianSumSpec& op,
                                         const Herm2& chi, double delta) {
    if (std::abs(chi.b) != 0.0)
        throw PreconditionError("manufactured_problem: chi must be diagonal");
    ManufacturedProblem out{GridField(N), GridField(N)};
    const PointOp pop(op);
    for (int i0 = 0; i0 < N; ++i0)
        for (int i1 = 0; i1 < N; ++i1)
            for (int i2 = 0; i2 < N; ++i2)
                for (int i3 = 0; i3 < N; ++i3) {
                    const double x1 = out.u_star.coord(i0);
                    const double y1 = out.u_star.coord(i1);
                    const double x2 = out.u_star.coord(i2);
                    const double y2 = out.u_star.coord(i3);
                    const std::size_t p = out.u_star.flat(i0, i1, i2, i3);
                    out.u_star[p] = amplitude * (std::cos(x1) + std::cos(y1) +
                                                 std::cos(x2) + std::cos(y2));
                    // analytic complex Hessian of u*: diagonal
                    const double g1 = chi.a - 0.25 * amplitude * (std::cos(x1) + std::cos(y1));
                    const double g2 = chi.d - 0.25 * amplitude * (std::cos(x2) + std::cos(y2));
                    const double l1 = std::max(g1, g2);
                    const double l2 = std::min(g1, g2);
                    if (!pop.admissible(l1, l2, delta))
                        throw PreconditionError(
                            "manufactured_problem: amplitude too large for admissibility");
                    out.psi_star[p] = pop.value(l1, l2);
                }
    out.u_star.subtract_mean();
    return out;
}

DiagnosticReport diagnose(const GridField& u, const HermitianField& g,
                          double n_test, double k_test, double delta) {
    const int N = u.N();
    const double h = u.h();
    DiagnosticReport rep{};
    rep.lambda_max = -std::numeric_limits<double>::infinity();
    rep.psh_margin_min = std::numeric_limits<double>::infinity();
    rep.du_sq_max = 0.0;
    rep.c1_norm = 0.0;

    std::vector<int> ip(N), im(N);
    for (int i = 0; i < N; ++i) {
        ip[i] = (i + 1) % N;
        im[i] = (i + N - 1) % N;
    }

    // |Du|^2 = sum_j |u_{z_j}|^2 with u_{z_j} = (d_x u - i d_y u)/2
    GridField du_sq(N);
    for (int i0 = 0; i0 < N; ++i0)
        for (int i1 = 0; i1 < N; ++i1)
            for (int i2 = 0; i2 < N; ++i2)
                for (int i3 = 0; i3 < N; ++i3) {
                    const double dx1 = (u.at(ip[i0], i1, i2, i3) -
                                        u.at(im[i0], i1, i2, i3)) / (2.0 * h);
                    const double dy1 = (u.at(i0, ip[i1], i2, i3) -
                                        u.at(i0, im[i1], i2, i3)) / (2.0 * h);
                    const double dx2 = (u.at(i0, i1, ip[i2], i3) -
                                        u.at(i0, i1, im[i2], i3)) / (2.0 * h);
                    const double dy2 = (u.at(i0, i1, i2, ip[i3]) -
                                        u.at(i0, i1, i2, im[i3])) / (2.0 * h);
                    const std::size_t p = u.flat(i0, i1, i2, i3);
                    du_sq[p] = 0.25 * (dx1 * dx1 + dy1 * dy1 + dx2 * dx2 + dy2 * dy2);
                    rep.du_sq_max = std::max(rep.du_sq_max, du_sq[p]);
                    rep.c1_norm = std::max(rep.c1_norm,
                                           std::abs(u[p]) + std::sqrt(du_sq[p]));
                }

    const double B = rep.c1_norm + 1.0;
    rep.g_max = -std::numeric_limits<double>::infinity();
    rep.g_argmax = {0, 0, 0, 0};
    rep.phi1_prime_min = std::numeric_limits<double>::infinity();
    rep.phi2_prime_max = -std::numeric_limits<double>::infinity();
    rep.phi2_second_min = std::numeric_limits<double>::infinity();
    rep.combined_min = std::numeric_limits<double>::infinity();

    for (std::size_t p = 0; p < g.size(); ++p) {
        const Eig2 e = eig2(g[p]);
        rep.lambda_max = std::max(rep.lambda_max, e.lam1);
        rep.psh_margin_min = std::min(rep.psh_margin_min, e.lam2 + delta * e.lam1);
        if (!(e.lam1 > 0.0))
            throw PreconditionError("diagnose: lambda_max must be positive");
        const double t = du_sq[p];
        const double s = u[p];
        const double G = std::log(e.lam1) + std::exp(n_test * t) +
                         std::exp(k_test * (-s + B));
        if (G > rep.g_max) {
            rep.g_max = G;
            rep.g_argmax = u.unflat(p);
        }
        const double phi1p = n_test * std::exp(n_test * t);
        const double phi1pp = n_test * n_test * std::exp(n_test * t);
        const double phi2p = -k_test * std::exp(k_test * (-s + B));
        const double phi2pp = k_test * k_test * std::exp(k_test * (-s + B));
        const double combined = phi1pp - 2.0 * phi2pp * (phi1p / phi2p) * (phi1p / phi2p);
        rep.phi1_prime_min = std::min(rep.phi1_prime_min, phi1p);
        rep.phi2_prime_max = std::max(rep.phi2_prime_max, phi2p);
        rep.phi2_second_min = std::min(rep.phi2_second_min, phi2pp);
        rep.combined_min = std::min(rep.combined_min, combined);
    }
    rep.sign_conditions_ok = rep.phi1_prime_min > 0.0 && rep.phi2_prime_max < 0.0 &&
                             rep.phi2_second_min > 0.0 && rep.combined_min > 0.0;
    return rep;
}

void write_field_dump(const std::string& path, int N,
                      const std::vector<const GridField*>& fields) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw std::runtime_error("cannot open field dump: " + path);
    const char magic[4] = {'H', 'C', 'L', '1'};
    const std::uint32_t n32 = static_cast<std::uint32_t>(N);
    const std::uint32_t count = static_cast<std::uint32_t>(fields.size());
    bool ok = std::fwrite(magic, 1, 4, f) == 4 &&
              std::fwrite(&n32, 4, 1, f) == 1 &&
              std::fwrite(&count, 4, 1, f) == 1;
    for (const GridField* g : fields)
        ok = ok && std::fwrite(g->data().data(), sizeof(double), g->size(), f) ==
                       g->size();
    ok = ok && std::fclose(f) == 0;
    if (!ok) throw std::runtime_error("field dump write failed: " + path);
}

std::vector<GridField> read_field_dump(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) throw std::runtime_error("cannot open field dump: " + path);
    char magic[4];
    std::uint32_t n32 = 0, count = 0;
    if (std::fread(magic, 1, 4, f) != 4 || std::memcmp(magic, "HCL1", 4) != 0 ||
        std::fread(&n32, 4, 1, f) != 1 || std::fread(&count, 4, 1, f) != 1) {
        std::fclose(f);
        throw std::runtime_error("bad field dump header: " + path);
    }
    std::vector<GridField> fields;
    fields.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
        GridField g(static_cast<int>(n32));
        if (std::fread(g.data().data(), sizeof(double), g.size(), f) != g.size()) {
            std::fclose(f);
            throw std::runtime_error("truncated field dump: " + path);
        }
        fields.push_back(std::move(g));
    }
    std::fclose(f);
    return fields;
}

} // namespace sumhess::solver
