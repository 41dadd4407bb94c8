#include "agler/cayley.hpp"

#include <algorithm>

#include "agler/numerics.hpp"

namespace agler::cayley {

using numerics::identity;
using numerics::norm;

Point disk_to_halfplane(const Point& zeta) {
    Point z(zeta.size());
    for (Eigen::Index k = 0; k < zeta.size(); ++k) {
        const Complex den = 1.0 - zeta[k];
        if (std::abs(den) <= kPoleRadius) {
            throw Error(ErrorCode::CayleySingular, "coordinate " + std::to_string(k + 1) + " equals 1");
        }
        z[k] = (1.0 + zeta[k]) / den;
    }
    return z;
}

Point halfplane_to_disk(const Point& z) {
    Point zeta(z.size());
    for (Eigen::Index k = 0; k < z.size(); ++k) {
        const Complex den = z[k] + 1.0;
        if (std::abs(den) <= kPoleRadius) {
            throw Error(ErrorCode::CayleySingular, "coordinate " + std::to_string(k + 1) + " equals -1");
        }
        zeta[k] = (z[k] - 1.0) / den;
    }
    return zeta;
}

ComplexMatrix value_cayley(const ComplexMatrix& m, ValueDirection direction) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "value Cayley needs a square matrix");
    const ComplexMatrix id = identity(m.rows());
    if (direction == ValueDirection::herglotz_to_schur) {
        // (M - I)(M + I)^{-1} = ((M + I)^{-T} (M - I)^T)^T
        ComplexMatrix xt = numerics::checked_solve((m + id).transpose(), (m - id).transpose(),
                                                   ErrorCode::SingularShift, "M + I");
        return xt.transpose();
    }
    return numerics::checked_solve(id - m, id + m, ErrorCode::SingularShift, "I - M");
}

TupleOfMatrices::TupleOfMatrices(std::vector<ComplexMatrix> items, double commutation_tol)
    : items_(std::move(items)), commutation_tol_(commutation_tol) {
    if (!items_.empty()) {
        const Eigen::Index s = items_.front().rows();
        for (const auto& t : items_) {
            if (t.rows() != s || t.cols() != s) {
                throw Error(ErrorCode::DimensionMismatch, "tuple entries must be square of equal size");
            }
            if (!t.allFinite()) throw Error(ErrorCode::Malformed, "tuple entry has non-finite values");
        }
    }
    for (std::size_t i = 0; i < items_.size(); ++i) {
        for (std::size_t j = i + 1; j < items_.size(); ++j) {
            const double comm = norm(ComplexMatrix(items_[i] * items_[j] - items_[j] * items_[i]));
            const double scale = std::max(1.0, norm(items_[i]) * norm(items_[j]));
            if (comm > commutation_tol_ * scale) {
                throw Error(ErrorCode::CommutationViolated,
                            "T" + std::to_string(i + 1) + " and T" + std::to_string(j + 1) + " do not commute");
            }
        }
    }
}

double TupleOfMatrices::max_commutator() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < items_.size(); ++i) {
        for (std::size_t j = i + 1; j < items_.size(); ++j) {
            worst = std::max(worst, norm(ComplexMatrix(items_[i] * items_[j] - items_[j] * items_[i])));
        }
    }
    return worst;
}

TupleOfMatrices operator_cayley_tuple(const TupleOfMatrices& t, TupleDirection direction, const Tolerances& tol) {
    tol.validate();
    std::vector<ComplexMatrix> out;
    out.reserve(t.items().size());
    const ComplexMatrix id = identity(t.size());
    for (int k = 0; k < t.d(); ++k) {
        const ComplexMatrix& x = t[k];
        if (direction == TupleDirection::contractive_to_accretive) {
            if (!(norm(x) < 1.0 - 1e-10)) {
                throw Error(ErrorCode::NotStrictContraction, "T" + std::to_string(k + 1) + " has norm >= 1");
            }
            out.push_back(numerics::checked_solve(id - x, id + x, ErrorCode::NotStrictContraction, "I - T"));
        } else {
            const ComplexMatrix herm = x + x.adjoint();
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(herm, Eigen::EigenvaluesOnly);
            if (t.size() > 0 && !(eig.eigenvalues()(0) > tol.psd_atol)) {
                throw Error(ErrorCode::NotStrictlyAccretive, "R" + std::to_string(k + 1) + " + R* is not positive");
            }
            ComplexMatrix yt = numerics::checked_solve((x + id).transpose(), (x - id).transpose(),
                                                       ErrorCode::NotStrictlyAccretive, "R + I");
            out.push_back(yt.transpose());
        }
    }
    // Rational functions of commuting matrices commute up to rounding; the
    // output is validated against a tolerance scaled like the input's.
    return TupleOfMatrices(std::move(out), std::max(t.commutation_tol(), 1e-10));
}

FunctionHandle double_cayley(const FunctionHandle& f) {
    if (f.rows != f.cols) throw Error(ErrorCode::DimensionMismatch, "double Cayley needs a square function");
    return FunctionHandle{f.d, f.rows, f.cols, Domain::polydisk, [f](const Point& zeta) {
                              return value_cayley(f(disk_to_halfplane(zeta)), ValueDirection::herglotz_to_schur);
                          }};
}

FunctionHandle compose_disk_to_halfplane(const FunctionHandle& f) {
    return FunctionHandle{f.d, f.rows, f.cols, Domain::polydisk,
                          [f](const Point& zeta) { return f(disk_to_halfplane(zeta)); }};
}

FunctionHandle compose_halfplane_to_disk(const FunctionHandle& f) {
    return FunctionHandle{f.d, f.rows, f.cols, Domain::polyhalfplane,
                          [f](const Point& z) { return f(halfplane_to_disk(z)); }};
}

}  // namespace agler::cayley
