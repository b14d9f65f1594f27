#pragma once

#include "sumhess/solver/grid.hpp"
#include "sumhess/sum_operator.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sumhess::solver {

/// Discrete complex Hessian u_{j kbar} with second-order centered stencils
/// (3-point pure, 4-point mixed) and periodic wraparound. Hermitian by
/// construction: only the upper triangle is formed.
HermitianField complex_hessian(const GridField& u);

/// g = chi + complex Hessian of u. Throws ChiNotUniformlyPositive when the
/// smallest eigenvalue of chi drops below eps at any point.
HermitianField assemble_g(const GridField& u, const Herm2& chi_const, double eps);
HermitianField assemble_g(const GridField& u, const HermitianField& chi, double eps);

/// Pointwise admissibility of g for the lifted operator: simga_j of
/// (lambda(g), y) positive for j = 1..k, and positive dynamic-psh margin
/// lambda_2 + delta lambda_1. Returns the first offending flat index.
std::optional<std::size_t> first_inadmissible_point(const HermitianField& g,
                                                    const HessianSumSpec& op,
                                                    double delta);

struct SolverState {
    GridField u;     // mean zero
    double c = 0.0;  // normalization constant of the right-hand side
    double residual_norm = 0.0;
    bool cone_ok = false;
    double psh_ratio = 0.0;  // min over grid of lambda_2 / lambda_1
};

/// Pointwise F(lambda(g(u))) - psi e^c plus the mean constraint value.
/// Throws InadmissiblePoint when some grid point leaves the lifted cone.
struct ResidualResult {
    GridField field;
    double mean_u;
};
ResidualResult residual(const SolverState& state, const GridField& psi,
                        const HessianSumSpec& op, const Herm2& chi, double chi_eps,
                        double delta);

/// Per-point linearization data: W = sum_i F_i(lambda) u_i u_i^*, stored as
/// (W11, W22, W12); the derivative of F(g) in direction eta(v) is tr(W eta).
struct LinearizedOperator {
    int N;
    std::vector<double> w11, w22;
    std::vector<Complex> w12;
    /// apply to v: tr(W . complex_hessian(v)) pointwise
    GridField apply(const GridField& v, unsigned threads = 0) const;
    /// diagonal of the operator (center stencil coefficient)
    double diag(std::size_t p) const;
};

LinearizedOperator linearize(const HermitianField& g, const HessianSumSpec& op);

enum class SolveStatus { Converged, MaxIterations, ConeGuardExhausted,
                         LinearSolveStagnation };

struct TraceRow {
    int iter;
    double residual_sup;
    double step;
    double c;
    double lambda_max;
    double psh_margin_min;
    int lin_iters;
};

struct NewtonConfig {
    double tol = 1e-9;
    int max_iter = 50;
    int max_halvings = 30;
    double lin_tol = 1e-8;
    int lin_max_iter = 200000;
    double delta = 0.01;    // dynamic-psh parameter used by the cone guard
    double chi_eps = 1.0;   // required lower bound on chi
    unsigned threads = 0;
};

struct SolveResult {
    SolveStatus status;
    GridField u;
    double c;
    std::vector<TraceRow> trace;
    double final_residual;
    std::string detail;     // witness location / failure note
};

/// Damped Newton on (u, c) for F(lambda(chi + Hess u)) = psi e^c with
/// mean(u) = 0. The bordered linear system is solved matrix-free by
/// BiCGStab with diagonal preconditioning.
SolveResult newton_solve(const GridField& psi, const HessianSumSpec& op,
                         const Herm2& chi, const NewtonConfig& cfg);

/// Same, but raising the typed errors instead of returning a status.
SolveResult newton_solve_or_throw(const GridField& psi, const HessianSumSpec& op,
                                  const Herm2& chi, const NewtonConfig& cfg);

/// Manufactured pair (u*, psi*): u* = A (cos x1 + cos y1 + cos x2 + cos y2)
/// mean-adjusted, psi* = F(lambda(chi + analytic Hessian of u*)) evaluated
/// with exact derivatives, so a discrete solve against psi* carries pure
/// discretization error. Throws when the amplitude breaks admissibility.
struct ManufacturedProblem {
    GridField u_star;
    GridField psi_star;
};
ManufacturedProblem manufactured_problem(int N, double amplitude,
                                         const HessianSumSpec& op,
                                         const Herm2& chi, double delta);

struct DiagnosticReport {
    double lambda_max;        // max over grid of lambda_1
    double psh_margin_min;    // min over grid of lambda_2 + delta lambda_1
    double g_max;             // max of the monitor field
    std::array<int, 4> g_argmax;
    double du_sq_max;         // max |Du|^2
    double c1_norm;           // sup |u| + |Du|
    double phi1_prime_min;    // N e^{N t}, should be positive
    double phi2_prime_max;    // -K e^{K(-s+B)}, should be negative
    double phi2_second_min;   // K^2 e^{K(-s+B)}, should be positive
    double combined_min;      // phi1'' - 2 phi2'' (phi1'/phi2')^2, positive
    bool sign_conditions_ok;
};

/// A priori-quantity monitor: extremal eigenvalue, dynamic-psh margin, and
/// the maximum-principle monitor field
///   G = log lambda_max + exp(N_test |Du|^2) + exp(K_test (-u + ||u||_C1 + 1)).
DiagnosticReport diagnose(const GridField& u, const HermitianField& g,
                          double n_test, double k_test, double delta);

/// Flat little-endian field dump: "HCL1", u32 N, u32 field count, then
/// row-major doubles per field.
void write_field_dump(const std::string& path, int N,
                      const std::vector<const GridField*>& fields);
std::vector<GridField> read_field_dump(const std::string& path);

} // namespace sumhess::solver
