#pragma once

#include "sumhess/solver/torus.hpp"

#include <string>

namespace sumhess::solver {

/// Key-value problem file with bracketed sections:
///
///   [problem]
///   N = 16
///   k = 2
///   b = 1.0            # space-separated coefficients; omit for m = 0
///   chi = identity     # or scaled:<factor>
///   chi_eps = 1.0
///   psi = manufactured # or constant:<value> or oscillatory:<base>:<amp>
///   amplitude = 0.1
///   delta = 0.01
///   [solver]
///   tol = 1e-9
///   max_iter = 50
///   max_halvings = 30
///   lin_tol = 1e-8
///   lin_max_iter = 200000
///   seed = 42
///   threads = 0
///   [output]
///   trace = trace.csv
///   summary = summary.json
///   fields = fields.bin
struct TorusProblem {
    int N = 16;
    int k = 2;
    Vec b;  // empty means m = 0
    double chi_scale = 1.0;
    double chi_eps = 1.0;
    enum class PsiMode { Manufactured, Constant, Oscillatory };
    PsiMode psi_mode = PsiMode::Manufactured;
    double psi_value = 1.0;   // Constant mode
    double psi_base = 3.0;    // Oscillatory mode
    double psi_amp = 0.5;
    double amplitude = 0.1;   // Manufactured mode
    double delta = 0.01;

    NewtonConfig newton;
    std::uint64_t seed = 42;

    std::string trace_path = "trace.csv";
    std::string summary_path = "summary.json";
    std::string fields_path = "fields.bin";

    HessianSumSpec make_operator() const;
    Herm2 make_chi() const;
    GridField make_psi() const;  // respects psi_mode
};

TorusProblem parse_problem_file(const std::string& path);

} // namespace sumhess::solver
