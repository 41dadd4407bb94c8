#include "agler/core.hpp"

#include <cmath>
#include <sstream>

namespace agler {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::GramMismatch: return "GramMismatch";
    case ErrorCode::HermitianInfeasible: return "HermitianInfeasible";
    case ErrorCode::RealInfeasible: return "RealInfeasible";
    case ErrorCode::CayleySingular: return "CayleySingular";
    case ErrorCode::SingularShift: return "SingularShift";
    case ErrorCode::NotStrictContraction: return "NotStrictContraction";
    case ErrorCode::NotStrictlyAccretive: return "NotStrictlyAccretive";
    case ErrorCode::CommutationViolated: return "CommutationViolated";
    case ErrorCode::ResolventSingular: return "ResolventSingular";
    case ErrorCode::InnerBlockSingular: return "InnerBlockSingular";
    case ErrorCode::EvaluationSingular: return "EvaluationSingular";
    case ErrorCode::KernelNotConstant: return "KernelNotConstant";
    case ErrorCode::NonzeroD: return "NonzeroD";
    case ErrorCode::NotUnitaryW: return "NotUnitaryW";
    case ErrorCode::EigenvalueOneResidue: return "EigenvalueOneResidue";
    case ErrorCode::NotReal: return "NotReal";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::InvalidPencil: return "InvalidPencil";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

bool Error::is_singular() const noexcept {
    switch (code_) {
    case ErrorCode::CayleySingular:
    case ErrorCode::SingularShift:
    case ErrorCode::ResolventSingular:
    case ErrorCode::InnerBlockSingular:
    case ErrorCode::EvaluationSingular:
        return true;
    default:
        return false;
    }
}

void Tolerances::validate() const {
    if (!(identity_atol > 0.0) || !(rank_rtol > 0.0) || !(psd_atol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "tolerances must be strictly positive");
    }
}

std::string_view to_string(Domain domain) {
    switch (domain) {
    case Domain::polydisk: return "polydisk";
    case Domain::polyhalfplane: return "polyhalfplane";
    case Domain::entire: return "entire";
    }
    return "unknown";
}

ComplexMatrix FunctionHandle::operator()(const Point& z) const {
    if (z.size() != d) {
        throw Error(ErrorCode::DimensionMismatch,
                    "point has " + std::to_string(z.size()) + " coordinates, expected " + std::to_string(d));
    }
    ComplexMatrix value = evaluator(z);
    if (!value.allFinite()) {
        throw Error(ErrorCode::EvaluationSingular, "non-finite value at " + format_point(z));
    }
    return value;
}

std::string format_point(const Point& z) {
    std::ostringstream out;
    out.precision(17);
    out << '(';
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        if (k > 0) out << ", ";
        out << z[k].real();
        if (z[k].imag() != 0.0) out << (z[k].imag() < 0 ? "-" : "+") << std::abs(z[k].imag()) << 'i';
    }
    out << ')';
    return out.str();
}

}  // namespace agler
