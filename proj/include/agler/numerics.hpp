#pragma once

// Dense complex linear-algebra contracts shared by every other module.

#include <vector>

#include "agler/core.hpp"

namespace agler::numerics {

/// Spectral norm (largest singular value); 0 for empty matrices.
double norm(const ComplexMatrix& m);
double norm(const RealMatrix& m);

ComplexMatrix identity(Eigen::Index n);

/// True when every imaginary part is exactly zero.
bool is_exactly_real(const ComplexMatrix& m);
double max_imag(const ComplexMatrix& m);

struct HermitianEig {
    Eigen::VectorXd eigenvalues;  // ascending
    ComplexMatrix vectors;        // unitary, columns match eigenvalues
};

/// Eigendecomposition of a Hermitian matrix. Real input takes a real solver so
/// that the eigenvectors come out real. Each eigenvector's first nonzero entry
/// is made real positive.
HermitianEig hermitian_eig(const ComplexMatrix& m, const Tolerances& tol = {});

/// Hermitian PSD square root; eigenvalues inside the PSD slack are clamped to 0.
ComplexMatrix psd_sqrt(const ComplexMatrix& m, const Tolerances& tol = {});

/// Inverse square root of a Hermitian positive definite matrix.
ComplexMatrix pd_inverse_sqrt(const ComplexMatrix& m, const Tolerances& tol = {});

/// Full-row-rank factor Y (r x n) with Y^* Y = M, r = numerical rank of M.
/// Rows are ordered by decreasing eigenvalue; each row's first nonzero entry is
/// real positive.
ComplexMatrix rank_factor_psd(const ComplexMatrix& m, const Tolerances& tol = {});

/// Numerical rank against the largest singular value.
Eigen::Index numerical_rank(const ComplexMatrix& m, double rank_rtol);

/// Unitary U (s x s) with U L = R, built from the Gram-matched column families L
/// and R. With hermitian_wanted the map is defined by L -> R and R -> L together
/// and completed by the identity on the orthogonal complement, giving U = U^*.
ComplexMatrix unitary_completion(const ComplexMatrix& l, const ComplexMatrix& r,
                                 bool hermitian_wanted, const Tolerances& tol = {});

/// Real variant: orthogonal U with U L = R (symmetric when requested).
RealMatrix orthogonal_completion(const RealMatrix& l, const RealMatrix& r,
                                 bool symmetric_wanted, const Tolerances& tol = {});

/// Orthonormal basis of the orthogonal complement of range(q), q with
/// orthonormal columns. Pivoted Gram-Schmidt over the standard basis: the
/// candidate with the largest residual wins, ties go to the lowest index.
ComplexMatrix complement_basis(const ComplexMatrix& q);
RealMatrix complement_basis(const RealMatrix& q);

/// Angular clustering radius for eigenvalues of unitary matrices.
inline constexpr double kEigenAngleTol = 1e-8;

/// Orthonormal basis of the eigenspace of a unitary W for the unimodular
/// eigenvalue lambda (eigenvalues within angle_tol of lambda are included).
ComplexMatrix eigenspace_of_unitary(const ComplexMatrix& w, Complex lambda, const Tolerances& tol = {},
                                    double angle_tol = kEigenAngleTol);

/// Smallest angular distance from lambda among the eigenvalues of a unitary w
/// (pi when w is empty).
double min_angle_to(const ComplexMatrix& w, Complex lambda);

/// Chord length |e^{i a} - 1| for an angle a.
double chord(double angle);

/// Largest condition number accepted by checked_solve.
inline constexpr double kMaxCondition = 1e12;

/// Solves A X = B by partial-pivot LU, refusing matrices whose estimated
/// condition number exceeds kMaxCondition. Failures raise `code` with `context`.
ComplexMatrix checked_solve(const ComplexMatrix& a, const ComplexMatrix& b, ErrorCode code,
                            const std::string& context);
ComplexMatrix checked_inverse(const ComplexMatrix& a, ErrorCode code, const std::string& context);

/// Shape and bitwise entry equality (no assertion on shape mismatch).
bool same_matrix(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product a (x) b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Applies the first-nonzero-entry-real-positive phase convention to each row.
void normalize_row_phases(ComplexMatrix& m);
void normalize_column_phases(ComplexMatrix& m);

}  // namespace agler::numerics
