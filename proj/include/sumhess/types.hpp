#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace sumhess {

using Vec  = Eigen::VectorXd;
using Mat  = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

/// Thrown when a documented precondition is violated by the caller.
struct PreconditionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The auxiliary polynomial P(t) has a root with a non-negligible
/// imaginary part; the operator is not admitted.
struct NotRealRooted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonHermitianInput : PreconditionError {
    using PreconditionError::PreconditionError;
};

/// Input lies outside the cone required by the operation.
struct ConeViolation : PreconditionError {
    using PreconditionError::PreconditionError;
};

struct DegenerateDenominator : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ChiNotUniformlyPositive : PreconditionError {
    using PreconditionError::PreconditionError;
};

/// A grid point left the admissible set; carries the flat index.
struct InadmissiblePoint : std::runtime_error {
    explicit InadmissiblePoint(const std::string& what, long index)
        : std::runtime_error(what), flat_index(index) {}
    long flat_index;
};

struct ConeGuardExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MaxIterations : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LinearSolveStagnation : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A finite real eigenvalue vector (n >= 2). The sorted flag records that
/// entries are non-increasing; it is validated on construction.
class Spectrum {
public:
    explicit Spectrum(Vec values, bool sorted_desc = false)
        : values_(std::move(values)), sorted_desc_(sorted_desc) {
        if (values_.size() < 2)
            throw PreconditionError("Spectrum needs at least 2 entries");
        if (!values_.allFinite())
            throw PreconditionError("Spectrum entries must be finite");
        if (sorted_desc_) {
            for (int i = 0; i + 1 < values_.size(); ++i)
                if (values_[i] < values_[i + 1])
                    throw PreconditionError("Spectrum not sorted descending");
        }
    }

    int n() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[i]; }
    const Vec& values() const { return values_; }
    bool sorted_desc() const { return sorted_desc_; }

private:
    Vec values_;
    bool sorted_desc_;
};

/// sigma_0..sigma_K of one spectrum; sigma_0 == 1, sigma_j == 0 for j > n.
struct SymTable {
    Vec sigmas;

    int highest_degree() const { return static_cast<int>(sigmas.size()) - 1; }
    double sigma(int j) const {
        if (j < 0 || j > highest_degree()) return 0.0;
        return sigmas[j];
    }
};

} // namespace sumhess
