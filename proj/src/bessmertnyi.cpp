#include "agler/bessmertnyi.hpp"

#include <cmath>
#include <sstream>

#include "agler/cayley.hpp"
#include "agler/numerics.hpp"

namespace agler::bessmertnyi {

using numerics::identity;
using numerics::norm;

namespace {

std::string sci(double x) {
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << x;
    return out.str();
}

double min_eigenvalue(const ComplexMatrix& m, const Tolerances& tol) {
    if (m.rows() == 0) return 0.0;
    return numerics::hermitian_eig(m, tol).eigenvalues(0);
}

/// conj(phi(conj z)).
ComplexMatrix sharp_value(const FunctionHandle& phi, const Point& z) { return phi(Point(z.conjugate())).conjugate(); }

}  // namespace

std::string to_string(PencilClass tag) {
    switch (tag) {
        case PencilClass::nonhomogeneous: return "nonhomogeneous";
        case PencilClass::homogeneous: return "homogeneous";
        case PencilClass::real_homogeneous: return "real_homogeneous";
    }
    return "nonhomogeneous";
}

PencilClass pencil_class_from_string(const std::string& name) {
    if (name == "nonhomogeneous") return PencilClass::nonhomogeneous;
    if (name == "homogeneous") return PencilClass::homogeneous;
    if (name == "real_homogeneous") return PencilClass::real_homogeneous;
    throw Error(ErrorCode::Malformed, "unknown pencil class '" + name + "'");
}

LongResolventPencil::LongResolventPencil(int n, std::vector<ComplexMatrix> coefficients, PencilClass tag,
                                         const Tolerances& tol)
    : n_(n), coefficients_(std::move(coefficients)), tag_(tag) {
    tol.validate();
    if (coefficients_.empty()) throw Error(ErrorCode::InvalidPencil, "a pencil needs at least A0");
    const Eigen::Index s = coefficients_.front().rows();
    if (n_ < 0 || n_ > s) throw Error(ErrorCode::InvalidPencil, "output block larger than the pencil");
    for (const auto& a : coefficients_) {
        if (a.rows() != s || a.cols() != s) throw Error(ErrorCode::InvalidPencil, "coefficients must share one square size");
        if (!a.allFinite()) throw Error(ErrorCode::InvalidPencil, "non-finite coefficient entries");
    }
    const ComplexMatrix& a0 = coefficients_.front();
    const double skew = norm(ComplexMatrix(a0 + a0.adjoint()));
    if (skew > tol.identity_atol) throw Error(ErrorCode::InvalidPencil, "A0 is not skew-Hermitian (" + sci(skew) + ")");
    for (std::size_t k = 1; k < coefficients_.size(); ++k) {
        const ComplexMatrix& a = coefficients_[k];
        const double asym = norm(ComplexMatrix(a - a.adjoint()));
        if (asym > tol.identity_atol) {
            throw Error(ErrorCode::InvalidPencil, "A" + std::to_string(k) + " is not Hermitian (" + sci(asym) + ")");
        }
        const double lo = min_eigenvalue(ComplexMatrix((a + a.adjoint()) / 2.0), tol);
        if (lo < -tol.psd_atol * std::max(1.0, norm(a))) {
            throw Error(ErrorCode::InvalidPencil, "A" + std::to_string(k) + " is not PSD (min eigenvalue " + sci(lo) + ")");
        }
    }
    if (tag_ != PencilClass::nonhomogeneous && norm(a0) > tol.identity_atol) {
        throw Error(ErrorCode::InvalidPencil, "homogeneous pencils require A0 = 0");
    }
    if (tag_ == PencilClass::real_homogeneous) {
        for (const auto& a : coefficients_) {
            if (numerics::max_imag(a) > tol.identity_atol) {
                throw Error(ErrorCode::InvalidPencil, "real pencil has imaginary entries");
            }
        }
    }
}

ComplexMatrix LongResolventPencil::matrix(const Point& z) const {
    if (z.size() != d()) throw Error(ErrorCode::DimensionMismatch, "point dimension differs from d");
    ComplexMatrix a = coefficients_.front();
    for (int k = 1; k <= d(); ++k) a += z[k - 1] * coefficients_[static_cast<std::size_t>(k)];
    return a;
}

bool LongResolventPencil::operator==(const LongResolventPencil& other) const {
    if (n_ != other.n_ || tag_ != other.tag_ || coefficients_.size() != other.coefficients_.size()) return false;
    for (std::size_t k = 0; k < coefficients_.size(); ++k) {
        if (!numerics::same_matrix(coefficients_[k], other.coefficients_[k])) return false;
    }
    return true;
}

ComplexMatrix eval_pencil(const LongResolventPencil& pencil, const Point& z) {
    const ComplexMatrix a = pencil.matrix(z);
    const int n = pencil.n();
    const int m = pencil.m();
    if (m == 0) return a;
    const ComplexMatrix x = numerics::checked_solve(a.bottomRightCorner(m, m), a.bottomLeftCorner(m, n),
                                                    ErrorCode::InnerBlockSingular, "A22(z) at " + format_point(z));
    return a.topLeftCorner(n, n) - a.topRightCorner(n, m) * x;
}

FunctionHandle pencil_handle(const LongResolventPencil& pencil) {
    return FunctionHandle{pencil.d(), pencil.n(), pencil.n(), Domain::polyhalfplane,
                          [pencil](const Point& z) { return eval_pencil(pencil, z); }};
}

ComplexMatrix pencil_psi(const LongResolventPencil& pencil, const Point& z) {
    const int n = pencil.n();
    const int m = pencil.m();
    ComplexMatrix psi(n + m, n);
    psi.topRows(n) = identity(n);
    if (m > 0) {
        const ComplexMatrix a = pencil.matrix(z);
        psi.bottomRows(m) = -numerics::checked_solve(a.bottomRightCorner(m, m), a.bottomLeftCorner(m, n),
                                                     ErrorCode::InnerBlockSingular, "A22(z) at " + format_point(z));
    }
    return psi;
}

PencilDecomposition pencil_decomposition(const LongResolventPencil& pencil, bool literal_sqrt, const Tolerances& tol) {
    PencilDecomposition out;
    for (int k = 1; k <= pencil.d(); ++k) {
        const ComplexMatrix& a = pencil.coefficient(k);
        ComplexMatrix y = literal_sqrt ? numerics::psd_sqrt(a, tol) : numerics::rank_factor_psd(a, tol);
        out.phis.push_back(FunctionHandle{pencil.d(), static_cast<int>(y.rows()), pencil.n(), Domain::polyhalfplane,
                                          [pencil, y](const Point& z) { return ComplexMatrix(y * pencil_psi(pencil, z)); }});
        out.factors.push_back(std::move(y));
    }
    return out;
}

std::vector<FunctionHandle> phi_to_theta(const std::vector<FunctionHandle>& phis, const FunctionHandle& f) {
    const FunctionHandle schur = cayley::double_cayley(f);
    std::vector<FunctionHandle> out;
    for (std::size_t k = 0; k < phis.size(); ++k) {
        const FunctionHandle phi = phis[k];
        const auto idx = static_cast<Eigen::Index>(k);
        out.push_back(FunctionHandle{phi.d, phi.rows, phi.cols, Domain::polydisk, [phi, schur, idx](const Point& zeta) {
                                         const ComplexMatrix fz = schur(zeta);
                                         const Complex factor = 1.0 / (1.0 - zeta[idx]);
                                         const ComplexMatrix p = phi(cayley::disk_to_halfplane(zeta));
                                         return ComplexMatrix(factor * p * (identity(fz.rows()) - fz));
                                     }});
    }
    return out;
}

std::vector<FunctionHandle> theta_to_phi(const std::vector<FunctionHandle>& thetas, const FunctionHandle& f) {
    std::vector<FunctionHandle> out;
    for (std::size_t k = 0; k < thetas.size(); ++k) {
        const FunctionHandle theta = thetas[k];
        const auto idx = static_cast<Eigen::Index>(k);
        out.push_back(FunctionHandle{theta.d, theta.rows, theta.cols, Domain::polyhalfplane,
                                     [theta, f, idx](const Point& z) {
                                         const ComplexMatrix fz = f(z);
                                         const Complex factor = 1.0 / (z[idx] + 1.0);
                                         const ComplexMatrix t = theta(cayley::halfplane_to_disk(z));
                                         return ComplexMatrix(factor * t * (fz + identity(fz.rows())));
                                     }});
    }
    return out;
}

LongResolventPencil herglotz_to_pencil(const herglotz::HerglotzRealization& h, const Tolerances& tol, int checks,
                                       std::uint64_t seed) {
    const int n = h.n();
    const int d = h.d();
    const ComplexMatrix q_h = numerics::eigenspace_of_unitary(h.w(), Complex(1.0, 0.0), tol);
    const ComplexMatrix q_perp = numerics::complement_basis(q_h);
    const Eigen::Index mh = q_h.cols();
    const Eigen::Index mp = q_perp.cols();
    ComplexMatrix q(h.m(), h.m());
    q << q_h, q_perp;

    const ComplexMatrix v1 = q_h.adjoint() * h.v();
    const ComplexMatrix v2 = q_perp.adjoint() * h.v();
    const ComplexMatrix w0 = q_perp.adjoint() * h.w() * q_perp;
    if (mp > 0) {
        const double gap = numerics::min_angle_to(w0, Complex(1.0, 0.0));
        if (gap < kEigenvalueOneGap) {
            throw Error(ErrorCode::EigenvalueOneResidue,
                        "W0 keeps an eigenvalue at angle " + sci(gap) + " from 1 after the split");
        }
    }
    const ComplexMatrix id_p = identity(mp);
    ComplexMatrix alpha = numerics::checked_solve(id_p - w0, ComplexMatrix(id_p + w0), ErrorCode::EigenvalueOneResidue,
                                                  "I - W0");
    const double alpha_scale = std::max(1.0, norm(alpha));
    const double alpha_skew = norm(ComplexMatrix(alpha + alpha.adjoint()));
    if (alpha_skew > tol.identity_atol * alpha_scale * alpha_scale) {
        throw Error(ErrorCode::Internal, "partial Cayley transform of W0 is not skew-Hermitian (" + sci(alpha_skew) + ")");
    }
    alpha = (alpha - alpha.adjoint()) / 2.0;
    // I - alpha^2 = I + alpha^* alpha is positive definite.
    const ComplexMatrix j = -alpha * numerics::checked_inverse(ComplexMatrix(id_p - alpha * alpha),
                                                               ErrorCode::Internal, "I - alpha^2");
    const ComplexMatrix ap = alpha + id_p;

    const int size = n + static_cast<int>(mp);
    std::vector<ComplexMatrix> coeffs;
    ComplexMatrix a0 = ComplexMatrix::Zero(size, size);
    a0.topLeftCorner(n, n) = h.beta() + v2.adjoint() * ap * j * ap.adjoint() * v2;
    a0.topRightCorner(n, mp) = v2.adjoint() * ap;
    a0.bottomLeftCorner(mp, n) = -ap.adjoint() * v2;
    a0.bottomRightCorner(mp, mp) = -alpha;
    coeffs.push_back((a0 - a0.adjoint()) / 2.0);
    for (int k = 0; k < d; ++k) {
        const ComplexMatrix pk = q.adjoint() * h.projector(k) * q;
        ComplexMatrix ak(size, size);
        ak.topLeftCorner(n, n) = v1.adjoint() * pk.topLeftCorner(mh, mh) * v1;
        ak.topRightCorner(n, mp) = v1.adjoint() * pk.topRightCorner(mh, mp);
        ak.bottomLeftCorner(mp, n) = pk.bottomLeftCorner(mp, mh) * v1;
        ak.bottomRightCorner(mp, mp) = pk.bottomRightCorner(mp, mp);
        coeffs.push_back((ak + ak.adjoint()) / 2.0);
    }
    LongResolventPencil pencil(n, std::move(coeffs), PencilClass::nonhomogeneous, tol);

    for (const Point& z : polyhalfplane_points(d, checks, seed)) {
        try {
            const ComplexMatrix expected = herglotz::eval_herglotz(h, cayley::halfplane_to_disk(z));
            const double diff = norm(ComplexMatrix(eval_pencil(pencil, z) - expected));
            if (diff > tol.identity_atol * std::max(1.0, norm(expected))) {
                throw Error(ErrorCode::Internal,
                            "pencil misses the Herglotz realization at " + format_point(z) + " by " + sci(diff));
            }
        } catch (const Error& e) {
            if (!e.is_singular()) throw;
        }
    }
    return pencil;
}

NormalizedPencil normalize_homogeneous(const LongResolventPencil& pencil, const Tolerances& tol, int checks,
                                       std::uint64_t seed) {
    if (norm(pencil.coefficient(0)) > tol.identity_atol) {
        throw Error(ErrorCode::InvalidPencil, "normalization needs A0 = 0");
    }
    const int n = pencil.n();
    const int m = pencil.m();
    const Point e = Point::Ones(pencil.d());
    ComplexMatrix fe = eval_pencil(pencil, e);
    fe = (fe + fe.adjoint()) / 2.0;
    const auto eig = numerics::hermitian_eig(fe, tol);
    if (n > 0 && eig.eigenvalues(0) < -tol.psd_atol * std::max(1.0, norm(fe))) {
        throw Error(ErrorCode::NotPSD, "f(e) is not PSD (min eigenvalue " + sci(eig.eigenvalues(0)) + ")");
    }
    const double top = n > 0 ? std::max(0.0, eig.eigenvalues(n - 1)) : 0.0;
    int r = 0;
    while (r < n && eig.eigenvalues(n - 1 - r) > tol.rank_rtol * top && eig.eigenvalues(n - 1 - r) > 0.0) ++r;
    ComplexMatrix kappa(n, r);
    for (int j = 0; j < r; ++j) kappa.col(j) = eig.vectors.col(n - 1 - j);

    auto congruence = [&](const ComplexMatrix& top_left) {
        ComplexMatrix t = ComplexMatrix::Zero(n + m, top_left.cols() + m);
        t.topLeftCorner(n, top_left.cols()) = top_left;
        t.bottomRightCorner(m, m) = identity(m);
        return t;
    };
    const ComplexMatrix f_red = kappa.adjoint() * fe * kappa;
    const ComplexMatrix s = numerics::pd_inverse_sqrt(f_red, tol);
    const ComplexMatrix t = congruence(ComplexMatrix(kappa * s));
    std::vector<ComplexMatrix> coeffs;
    for (const auto& a : pencil.coefficients()) {
        ComplexMatrix c = t.adjoint() * a * t;
        coeffs.push_back((c + c.adjoint()) / 2.0);
    }
    coeffs.front().setZero();
    if (pencil.tag() == PencilClass::real_homogeneous) {
        for (auto& c : coeffs) c = c.real().cast<Complex>();
    }
    NormalizedPencil out{numerics::psd_sqrt(f_red, tol) * kappa.adjoint(),
                         LongResolventPencil(r, std::move(coeffs), pencil.tag(), tol)};

    const ComplexMatrix at_e = eval_pencil(out.pencil, e);
    if (norm(ComplexMatrix(at_e - identity(r))) > tol.identity_atol * std::max(1.0, norm(at_e))) {
        throw Error(ErrorCode::Internal, "normalized pencil misses f_+(e) = I");
    }
    for (const Point& z : polyhalfplane_points(pencil.d(), checks, seed)) {
        try {
            const ComplexMatrix fz = eval_pencil(pencil, z);
            const ComplexMatrix rebuilt = out.delta.adjoint() * eval_pencil(out.pencil, z) * out.delta;
            const double diff = norm(ComplexMatrix(rebuilt - fz));
            if (diff > tol.identity_atol * std::max(1.0, norm(fz))) {
                throw Error(ErrorCode::KernelNotConstant,
                            "f leaves the range of f(e) at " + format_point(z) + " (" + sci(diff) + ")");
            }
        } catch (const Error& e2) {
            if (!e2.is_singular()) throw;
        }
    }
    return out;
}

std::vector<SampleReport> StructureCheck::reports(double threshold) const {
    auto one = [threshold](std::string name, double value) {
        ReportBuilder b(std::move(name), threshold);
        b.record(value, std::vector<Complex>{});
        return b.finish();
    };
    return {one("structure_beta", beta_norm), one("structure_w_hermitian", w_asymmetry),
            one("structure_range_v", range_defect)};
}

StructureCheck homogeneous_structure_check(const herglotz::HerglotzRealization& h, const Tolerances& tol) {
    StructureCheck out;
    out.beta_norm = norm(h.beta());
    out.w_asymmetry = norm(ComplexMatrix(h.w() - h.w().adjoint()));
    const ComplexMatrix q_h = numerics::eigenspace_of_unitary(h.w(), Complex(1.0, 0.0), tol);
    out.range_defect = norm(ComplexMatrix(h.v() - q_h * (q_h.adjoint() * h.v())));
    out.beta_zero = out.beta_norm <= tol.identity_atol;
    out.w_hermitian = out.w_asymmetry <= tol.identity_atol;
    out.range_in_eigenspace = out.range_defect <= tol.identity_atol;
    return out;
}

std::vector<FunctionHandle> realify_decomposition(const std::vector<FunctionHandle>& phis, const FunctionHandle& f,
                                                  const Tolerances& tol, std::uint64_t seed, int checks) {
    for (const Point& z : polyhalfplane_points(f.d, checks, seed)) {
        try {
            const ComplexMatrix fz = f(z);
            const double diff = norm(ComplexMatrix(f(Point(z.conjugate())) - fz.conjugate()));
            if (diff > tol.identity_atol * std::max(1.0, norm(fz))) {
                throw Error(ErrorCode::NotReal, "f(conj z) differs from conj f(z) at " + format_point(z) + " by " + sci(diff));
            }
        } catch (const Error& e) {
            if (!e.is_singular()) throw;
        }
    }
    std::vector<FunctionHandle> out;
    for (const FunctionHandle& phi : phis) {
        out.push_back(FunctionHandle{phi.d, 2 * phi.rows, phi.cols, phi.domain, [phi](const Point& z) {
                                         const ComplexMatrix p = phi(z);
                                         const ComplexMatrix ps = sharp_value(phi, z);
                                         ComplexMatrix stacked(2 * p.rows(), p.cols());
                                         stacked.topRows(p.rows()) = (p + ps) / 2.0;
                                         stacked.bottomRows(p.rows()) = (p - ps) / Complex(0.0, 2.0);
                                         return stacked;
                                     }});
    }
    return out;
}

}  // namespace agler::bessmertnyi
