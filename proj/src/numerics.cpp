#include "agler/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace agler::numerics {

namespace {

template <typename Mat>
double spectral_norm(const Mat& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

std::string sci(double x) {
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << x;
    return out.str();
}

double psd_floor(const ComplexMatrix& m, const Tolerances& tol) {
    return -tol.psd_atol * std::max(1.0, norm(m));
}

template <typename Mat>
Mat complement_impl(const Mat& q) {
    using Scalar = typename Mat::Scalar;
    const Eigen::Index s = q.rows();
    const Eigen::Index k = q.cols();
    Mat basis(s, s);
    basis.leftCols(k) = q;
    Eigen::Index filled = k;
    while (filled < s) {
        auto current = basis.leftCols(filled);
        Mat residual = Mat::Identity(s, s) - current * current.adjoint();
        Eigen::Index best = 0;
        double best_norm = -1.0;
        for (Eigen::Index i = 0; i < s; ++i) {
            const double nrm = residual.col(i).norm();
            if (nrm > best_norm) {
                best_norm = nrm;
                best = i;
            }
        }
        Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = residual.col(best);
        v -= current * (current.adjoint() * v);  // second pass
        v /= v.norm();
        basis.col(filled) = v;
        ++filled;
    }
    return basis.rightCols(s - k);
}

template <typename Mat>
Mat completion_impl(const Mat& l, const Mat& r, bool hermitian_wanted, const Tolerances& tol) {
    tol.validate();
    if (l.rows() != r.rows() || l.cols() != r.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "completion needs L and R of equal shape");
    }
    const Eigen::Index s = l.rows();
    const double l_norm = spectral_norm(l);
    const double scale = std::max(1.0, l_norm * l_norm);

    const double gram = spectral_norm(Mat(l.adjoint() * l - r.adjoint() * r));
    if (gram > tol.identity_atol * scale) {
        throw Error(ErrorCode::GramMismatch, "||L*L - R*R|| = " + sci(gram) + " exceeds " +
                                                 sci(tol.identity_atol * scale));
    }

    Mat src = l;
    Mat dst = r;
    if (hermitian_wanted) {
        const double cross = spectral_norm(Mat(l.adjoint() * r - r.adjoint() * l));
        if (cross > tol.identity_atol * scale) {
            throw Error(ErrorCode::HermitianInfeasible,
                        "cross-Gram L*R is not Hermitian (residual " + sci(cross) + ")");
        }
        src.resize(s, 2 * l.cols());
        dst.resize(s, 2 * l.cols());
        src << l, r;
        dst << r, l;
    }

    Eigen::Index rank = 0;
    Mat q_src(s, 0);
    Mat q_dst(s, 0);
    if (src.cols() > 0 && s > 0) {
        Eigen::JacobiSVD<Mat> svd(src, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const auto& sv = svd.singularValues();
        const double cut = tol.rank_rtol * sv(0);
        while (rank < sv.size() && sv(rank) > cut && sv(rank) > 0.0) ++rank;
        q_src = svd.matrixU().leftCols(rank);
        Mat image = dst * svd.matrixV().leftCols(rank);
        for (Eigen::Index j = 0; j < rank; ++j) image.col(j) /= sv(j);
        // Polar factor: nearest orthonormal frame to the mapped basis.
        if (rank > 0) {
            Eigen::JacobiSVD<Mat> polar(image, Eigen::ComputeThinU | Eigen::ComputeThinV);
            image = polar.matrixU() * polar.matrixV().adjoint();
        }
        q_dst = image;
    }

    Mat u = q_dst * q_src.adjoint();
    if (hermitian_wanted) {
        Mat c = complement_impl(q_src);
        u += c * c.adjoint();
    } else {
        Mat c_src = complement_impl(q_src);
        Mat c_dst = complement_impl(q_dst);
        u += c_dst * c_src.adjoint();
    }

    const double fit_scale = tol.identity_atol * std::max(1.0, l_norm);
    const double fit = spectral_norm(Mat(u * l - r));
    if (fit > fit_scale) {
        throw Error(ErrorCode::GramMismatch, "completion reproduces R only to " + sci(fit));
    }
    if (hermitian_wanted) {
        const double back = spectral_norm(Mat(u * r - l));
        if (back > fit_scale) {
            throw Error(ErrorCode::HermitianInfeasible, "completion maps R back to L only to " + sci(back));
        }
    }
    return u;
}

}  // namespace

double norm(const ComplexMatrix& m) { return spectral_norm(m); }
double norm(const RealMatrix& m) { return spectral_norm(m); }

ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

bool is_exactly_real(const ComplexMatrix& m) {
    return (m.array().imag() == 0.0).all();
}

double max_imag(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    return m.imag().cwiseAbs().maxCoeff();
}

void normalize_row_phases(ComplexMatrix& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double big = m.row(i).cwiseAbs().maxCoeff();
        if (big == 0.0) continue;
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (std::abs(m(i, j)) > 1e-10 * big) {
                const Complex phase = std::conj(m(i, j)) / std::abs(m(i, j));
                m.row(i) *= phase;
                m(i, j) = std::abs(m(i, j));
                break;
            }
        }
    }
}

void normalize_column_phases(ComplexMatrix& m) {
    ComplexMatrix t = m.transpose();
    normalize_row_phases(t);
    m = t.transpose();
}

HermitianEig hermitian_eig(const ComplexMatrix& m, const Tolerances& tol) {
    tol.validate();
    if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "hermitian_eig needs a square matrix");
    const double asym = norm(ComplexMatrix(m - m.adjoint()));
    if (asym > tol.identity_atol * std::max(1.0, norm(m))) {
        throw Error(ErrorCode::NotHermitian, "||M - M*|| = " + sci(asym));
    }
    HermitianEig out;
    if (m.size() == 0) {
        out.eigenvalues.resize(0);
        out.vectors.resize(0, 0);
        return out;
    }
    const ComplexMatrix sym = 0.5 * (m + m.adjoint());
    if (is_exactly_real(sym)) {
        Eigen::SelfAdjointEigenSolver<RealMatrix> solver(sym.real());
        out.eigenvalues = solver.eigenvalues();
        out.vectors = solver.eigenvectors().cast<Complex>();
    } else {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
        out.eigenvalues = solver.eigenvalues();
        out.vectors = solver.eigenvectors();
    }
    normalize_column_phases(out.vectors);
    return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& m, const Tolerances& tol) {
    auto eig = hermitian_eig(m, tol);
    if (m.size() == 0) return m;
    if (eig.eigenvalues(0) < psd_floor(m, tol)) {
        throw Error(ErrorCode::NotPSD, "min eigenvalue " + sci(eig.eigenvalues(0)));
    }
    Eigen::VectorXd root = eig.eigenvalues.cwiseMax(0.0).cwiseSqrt();
    ComplexMatrix s = eig.vectors * root.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    return 0.5 * (s + s.adjoint());
}

ComplexMatrix pd_inverse_sqrt(const ComplexMatrix& m, const Tolerances& tol) {
    auto eig = hermitian_eig(m, tol);
    if (m.size() == 0) return m;
    const double top = eig.eigenvalues(eig.eigenvalues.size() - 1);
    if (!(eig.eigenvalues(0) > tol.rank_rtol * std::max(top, 0.0)) || !(eig.eigenvalues(0) > 0.0)) {
        throw Error(ErrorCode::NotPSD, "matrix is not positive definite (min eigenvalue " +
                                           sci(eig.eigenvalues(0)) + ")");
    }
    Eigen::VectorXd inv_root = eig.eigenvalues.cwiseSqrt().cwiseInverse();
    ComplexMatrix s = eig.vectors * inv_root.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
    return 0.5 * (s + s.adjoint());
}

ComplexMatrix rank_factor_psd(const ComplexMatrix& m, const Tolerances& tol) {
    auto eig = hermitian_eig(m, tol);
    const Eigen::Index n = m.rows();
    if (n == 0) return ComplexMatrix(0, 0);
    if (eig.eigenvalues(0) < psd_floor(m, tol)) {
        throw Error(ErrorCode::NotPSD, "min eigenvalue " + sci(eig.eigenvalues(0)));
    }
    const double top = eig.eigenvalues(n - 1);
    std::vector<Eigen::Index> kept;
    for (Eigen::Index i = n - 1; i >= 0; --i) {
        const double lambda = eig.eigenvalues(i);
        if (lambda > 0.0 && lambda > tol.rank_rtol * top) kept.push_back(i);
    }
    ComplexMatrix y(static_cast<Eigen::Index>(kept.size()), n);
    for (std::size_t row = 0; row < kept.size(); ++row) {
        const Eigen::Index i = kept[row];
        y.row(static_cast<Eigen::Index>(row)) = std::sqrt(eig.eigenvalues(i)) * eig.vectors.col(i).adjoint();
    }
    normalize_row_phases(y);
    return y;
}

Eigen::Index numerical_rank(const ComplexMatrix& m, double rank_rtol) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) > rank_rtol * sv(0) && sv(rank) > 0.0) ++rank;
    return rank;
}

ComplexMatrix unitary_completion(const ComplexMatrix& l, const ComplexMatrix& r, bool hermitian_wanted,
                                 const Tolerances& tol) {
    return completion_impl(l, r, hermitian_wanted, tol);
}

RealMatrix orthogonal_completion(const RealMatrix& l, const RealMatrix& r, bool symmetric_wanted,
                                 const Tolerances& tol) {
    return completion_impl(l, r, symmetric_wanted, tol);
}

ComplexMatrix complement_basis(const ComplexMatrix& q) { return complement_impl(q); }
RealMatrix complement_basis(const RealMatrix& q) { return complement_impl(q); }

double chord(double angle) { return 2.0 * std::sin(0.5 * angle); }

namespace {

void require_unitary(const ComplexMatrix& w, const Tolerances& tol) {
    if (w.rows() != w.cols()) throw Error(ErrorCode::DimensionMismatch, "unitary matrix must be square");
    const double defect = norm(ComplexMatrix(w.adjoint() * w - identity(w.rows())));
    if (defect > tol.identity_atol) {
        throw Error(ErrorCode::NotUnitary, "||W*W - I|| = " + sci(defect));
    }
}

}  // namespace

ComplexMatrix eigenspace_of_unitary(const ComplexMatrix& w, Complex lambda, const Tolerances& tol,
                                    double angle_tol) {
    tol.validate();
    require_unitary(w, tol);
    if (std::abs(std::abs(lambda) - 1.0) > tol.identity_atol) {
        throw Error(ErrorCode::InvalidArgument, "eigenvalue target must be unimodular");
    }
    const Eigen::Index m = w.rows();
    if (m == 0) return ComplexMatrix(0, 0);
    // For a normal matrix the singular values of W - lambda I are |mu - lambda|.
    const ComplexMatrix shifted = w - lambda * identity(m);
    Eigen::JacobiSVD<ComplexMatrix> svd(shifted, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cut = chord(angle_tol);
    std::vector<Eigen::Index> cols;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv(i) <= cut) cols.push_back(i);
    }
    ComplexMatrix q(m, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) q.col(static_cast<Eigen::Index>(j)) = svd.matrixV().col(cols[j]);
    normalize_column_phases(q);
    return q;
}

double min_angle_to(const ComplexMatrix& w, Complex lambda) {
    if (w.size() == 0) return std::numbers::pi;
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(w, false);
    double best = std::numbers::pi;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const Complex mu = solver.eigenvalues()(i);
        best = std::min(best, std::abs(std::arg(mu / lambda)));
    }
    return best;
}

ComplexMatrix checked_solve(const ComplexMatrix& a, const ComplexMatrix& b, ErrorCode code,
                            const std::string& context) {
    if (a.rows() != a.cols() || a.rows() != b.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "checked_solve shape mismatch (" + context + ")");
    }
    if (a.rows() == 0) return ComplexMatrix::Zero(0, b.cols());
    Eigen::PartialPivLU<ComplexMatrix> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond * kMaxCondition > 1.0)) {
        throw Error(code, context + ": condition number ~" + sci(rcond > 0 ? 1.0 / rcond : INFINITY) +
                              " exceeds " + sci(kMaxCondition));
    }
    ComplexMatrix x = lu.solve(b);
    if (!x.allFinite()) throw Error(code, context + ": non-finite solve");
    return x;
}

ComplexMatrix checked_inverse(const ComplexMatrix& a, ErrorCode code, const std::string& context) {
    return checked_solve(a, identity(a.rows()), code, context);
}

bool same_matrix(const ComplexMatrix& a, const ComplexMatrix& b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

}  // namespace agler::numerics
