#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace agler {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
/// A point of C^d.
using Point = Eigen::VectorXcd;

/// Failure categories. Every error raised by the library carries one of these;
/// the CLI maps them onto exit codes.
enum class ErrorCode {
    DimensionMismatch,
    NotHermitian,
    NotPSD,
    NotUnitary,
    GramMismatch,
    HermitianInfeasible,
    RealInfeasible,
    CayleySingular,
    SingularShift,
    NotStrictContraction,
    NotStrictlyAccretive,
    CommutationViolated,
    ResolventSingular,
    InnerBlockSingular,
    EvaluationSingular,
    KernelNotConstant,
    NonzeroD,
    NotUnitaryW,
    EigenvalueOneResidue,
    NotReal,
    InsufficientSamples,
    InvalidPencil,
    InvalidArgument,
    Malformed,
    Internal,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), detail_(what) {}

    ErrorCode code() const noexcept { return code_; }
    /// Message without the code prefix.
    const std::string& detail() const noexcept { return detail_; }

    /// True for the failure modes that mean "this point cannot be evaluated".
    bool is_singular() const noexcept;

private:
    ErrorCode code_;
    std::string detail_;
};

/// All numerical thresholds, threaded explicitly through every operation.
struct Tolerances {
    double identity_atol = 1e-9;
    double rank_rtol = 1e-10;
    double psd_atol = 1e-10;

    void validate() const;
};

enum class Domain { polydisk, polyhalfplane, entire };

std::string_view to_string(Domain domain);

/// A matrix-valued function of d complex variables, carried as an evaluator.
/// Evaluators must be reentrant; singular points raise Error with a singular code.
struct FunctionHandle {
    int d = 0;
    int rows = 0;
    int cols = 0;
    Domain domain = Domain::entire;
    std::function<ComplexMatrix(const Point&)> evaluator;

    ComplexMatrix operator()(const Point& z) const;
};

/// Two-point evaluator (w, z) -> K(w, z).
using KernelFunction = std::function<ComplexMatrix(const Point&, const Point&)>;

std::string format_point(const Point& z);

}  // namespace agler
