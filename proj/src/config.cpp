#include "sumhess/solver/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sumhess::solver {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_real(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": bad number for '" +
                          key + "': " + v);
    }
}

long parse_int(const std::string& v, const std::string& key, int line) {
    try {
        std::size_t used = 0;
        const long x = std::stol(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("line " + std::to_string(line) + ": bad integer for '" +
                          key + "': " + v);
    }
}

} // namespace

HessianSumSpec TorusProblem::make_operator() const {
    return b.size() ? HessianSumSpec::from_coefficients(2, k, b)
                    : HessianSumSpec::pure(2, k);
}

Herm2 TorusProblem::make_chi() const {
    Herm2 chi;
    chi.a = chi.d = chi_scale;
    return chi;
}

GridField TorusProblem::make_psi() const {
    switch (psi_mode) {
        case PsiMode::Constant:
            return GridField(N, psi_value);
        case PsiMode::Manufactured:
            return manufactured_problem(N, amplitude, make_operator(), make_chi(),
                                        delta).psi_star;
        case PsiMode::Oscillatory: {
            GridField psi(N);
            for (int i0 = 0; i0 < N; ++i0)
                for (int i1 = 0; i1 < N; ++i1)
                    for (int i2 = 0; i2 < N; ++i2)
                        for (int i3 = 0; i3 < N; ++i3)
                            psi.at(i0, i1, i2, i3) = std::max(
                                psi_base + psi_amp * std::cos(psi.coord(i0)) *
                                               std::cos(psi.coord(i1)),
                                1e-8);
            return psi;
        }
    }
    throw ConfigError("unknown psi mode");
}

TorusProblem parse_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open problem file: " + path);

    TorusProblem p;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = line.substr(1, line.size() - 2);
            if (section != "problem" && section != "solver" && section != "output")
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (section == "problem") {
            if (key == "N") p.N = static_cast<int>(parse_int(val, key, lineno));
            else if (key == "k") p.k = static_cast<int>(parse_int(val, key, lineno));
            else if (key == "b") {
                std::istringstream bs(val);
                std::vector<double> coeffs;
                std::string tok;
                while (bs >> tok) coeffs.push_back(parse_real(tok, key, lineno));
                p.b.resize(static_cast<int>(coeffs.size()));
                for (std::size_t i = 0; i < coeffs.size(); ++i) p.b[i] = coeffs[i];
            } else if (key == "chi") {
                if (val == "identity") p.chi_scale = 1.0;
                else if (val.rfind("scaled:", 0) == 0)
                    p.chi_scale = parse_real(val.substr(7), key, lineno);
                else
                    throw ConfigError("line " + std::to_string(lineno) +
                                      ": chi must be identity or scaled:<v>");
            } else if (key == "chi_eps") p.chi_eps = parse_real(val, key, lineno);
            else if (key == "psi") {
                if (val == "manufactured") p.psi_mode = TorusProblem::PsiMode::Manufactured;
                else if (val.rfind("constant:", 0) == 0) {
                    p.psi_mode = TorusProblem::PsiMode::Constant;
                    p.psi_value = parse_real(val.substr(9), key, lineno);
                } else if (val.rfind("oscillatory:", 0) == 0) {
                    p.psi_mode = TorusProblem::PsiMode::Oscillatory;
                    const std::string rest = val.substr(12);
                    const auto colon = rest.find(':');
                    if (colon == std::string::npos)
                        throw ConfigError("line " + std::to_string(lineno) +
                                          ": oscillatory:<base>:<amp>");
                    p.psi_base = parse_real(rest.substr(0, colon), key, lineno);
                    p.psi_amp = parse_real(rest.substr(colon + 1), key, lineno);
                } else
                    throw ConfigError("line " + std::to_string(lineno) +
                                      ": unknown psi mode: " + val);
            } else if (key == "amplitude") p.amplitude = parse_real(val, key, lineno);
            else if (key == "delta") p.delta = parse_real(val, key, lineno);
            else
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "' in [problem]");
        } else if (section == "solver") {
            if (key == "tol") p.newton.tol = parse_real(val, key, lineno);
            else if (key == "max_iter")
                p.newton.max_iter = static_cast<int>(parse_int(val, key, lineno));
            else if (key == "max_halvings")
                p.newton.max_halvings = static_cast<int>(parse_int(val, key, lineno));
            else if (key == "lin_tol") p.newton.lin_tol = parse_real(val, key, lineno);
            else if (key == "lin_max_iter")
                p.newton.lin_max_iter = static_cast<int>(parse_int(val, key, lineno));
            else if (key == "seed")
                p.seed = static_cast<std::uint64_t>(parse_int(val, key, lineno));
            else if (key == "threads")
                p.newton.threads = static_cast<unsigned>(parse_int(val, key, lineno));
            else
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "' in [solver]");
        } else if (section == "output") {
            if (key == "trace") p.trace_path = val;
            else if (key == "summary") p.summary_path = val;
            else if (key == "fields") p.fields_path = val;
            else
                throw ConfigError("line " + std::to_string(lineno) +
                                  ": unknown key '" + key + "' in [output]");
        } else {
            throw ConfigError("line " + std::to_string(lineno) +
                              ": key outside any section");
        }
    }
    p.newton.delta = p.delta;
    p.newton.chi_eps = p.chi_eps;
    if (p.N < 8 || p.N % 2)
        throw ConfigError("N must be even and >= 8");
    if (p.k < 1 || p.k > 2)
        throw ConfigError("k must be 1 or 2 on the complex 2-torus");
    if (p.b.size() >= p.k)
        throw ConfigError("need m < k lower-order coefficients");
    return p;
}

} // namespace sumhess::solver
