#include "agler/herglotz.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "agler/numerics.hpp"
#include "agler/sampling.hpp"

namespace agler::herglotz {

using numerics::identity;
using numerics::norm;

namespace {

std::string sci(double x) {
    std::ostringstream out;
    out.precision(3);
    out << std::scientific << x;
    return out.str();
}

}  // namespace

HerglotzRealization::HerglotzRealization(std::vector<int> state_dims, ComplexMatrix beta, ComplexMatrix w,
                                         ComplexMatrix v, const Tolerances& tol)
    : state_dims_(std::move(state_dims)), beta_(std::move(beta)), w_(std::move(w)), v_(std::move(v)) {
    tol.validate();
    const int m = std::accumulate(state_dims_.begin(), state_dims_.end(), 0);
    for (int mk : state_dims_) {
        if (mk < 0) throw Error(ErrorCode::InvalidArgument, "negative state dimension");
    }
    if (beta_.rows() != beta_.cols()) throw Error(ErrorCode::DimensionMismatch, "beta must be square");
    if (w_.rows() != m || w_.cols() != m) throw Error(ErrorCode::DimensionMismatch, "W must be m x m");
    if (v_.rows() != m || v_.cols() != beta_.rows()) throw Error(ErrorCode::DimensionMismatch, "V must be m x n");
    if (!beta_.allFinite() || !w_.allFinite() || !v_.allFinite()) {
        throw Error(ErrorCode::Malformed, "non-finite entries in Herglotz realization");
    }
    const double skew = norm(ComplexMatrix(beta_ + beta_.adjoint()));
    if (skew > tol.identity_atol) throw Error(ErrorCode::NotHermitian, "beta is not skew-Hermitian: " + sci(skew));
    const double unitary = norm(ComplexMatrix(w_.adjoint() * w_ - identity(m)));
    if (unitary > tol.identity_atol) throw Error(ErrorCode::NotUnitary, "W is not unitary: " + sci(unitary));
}

ComplexMatrix HerglotzRealization::variable_matrix(const Point& zeta) const {
    if (zeta.size() != d()) throw Error(ErrorCode::DimensionMismatch, "point dimension differs from d");
    Eigen::VectorXcd diag(m());
    int offset = 0;
    for (int k = 0; k < d(); ++k) {
        const int mk = state_dims_[static_cast<std::size_t>(k)];
        diag.segment(offset, mk).setConstant(zeta[k]);
        offset += mk;
    }
    return diag.asDiagonal();
}

ComplexMatrix HerglotzRealization::projector(int k) const {
    ComplexMatrix p = ComplexMatrix::Zero(m(), m());
    const int offset = std::accumulate(state_dims_.begin(), state_dims_.begin() + k, 0);
    const int mk = state_dims_.at(static_cast<std::size_t>(k));
    p.block(offset, offset, mk, mk).setIdentity();
    return p;
}

bool HerglotzRealization::operator==(const HerglotzRealization& other) const {
    return state_dims_ == other.state_dims_ && numerics::same_matrix(beta_, other.beta_) &&
           numerics::same_matrix(w_, other.w_) && numerics::same_matrix(v_, other.v_);
}

ComplexMatrix eval_herglotz(const HerglotzRealization& h, const Point& zeta) {
    const ComplexMatrix p = h.variable_matrix(zeta);
    const ComplexMatrix x = numerics::checked_solve(h.w() - p, ComplexMatrix((h.w() + p) * h.v()),
                                                    ErrorCode::ResolventSingular, "W - P(zeta) at " + format_point(zeta));
    return h.beta() + h.v().adjoint() * x;
}

FunctionHandle herglotz_handle(const HerglotzRealization& h) {
    return FunctionHandle{h.d(), h.n(), h.n(), Domain::polydisk,
                          [h](const Point& zeta) { return eval_herglotz(h, zeta); }};
}

Split split_at_zero(const ComplexMatrix& f0, const Tolerances& tol) {
    if (f0.rows() != f0.cols()) throw Error(ErrorCode::DimensionMismatch, "F(0) must be square");
    Split s;
    s.beta = (f0 - f0.adjoint()) / 2.0;
    s.gamma = (f0 + f0.adjoint()) / 2.0;
    s.delta = numerics::rank_factor_psd(s.gamma, tol);
    return s;
}

FunctionHandle reduce_to_plus(const FunctionHandle& f, const ComplexMatrix& beta, const ComplexMatrix& delta,
                              const Tolerances& tol, int checks, std::uint64_t seed) {
    const Eigen::Index r = delta.rows();
    if (f.rows != f.cols || delta.cols() != f.rows || beta.rows() != f.rows || beta.cols() != f.rows) {
        throw Error(ErrorCode::DimensionMismatch, "F, beta and delta shapes disagree");
    }
    if (numerics::numerical_rank(delta, tol.rank_rtol) != r) {
        throw Error(ErrorCode::InvalidArgument, "delta must have full row rank");
    }
    const ComplexMatrix gram = delta * delta.adjoint();
    const ComplexMatrix left =
        numerics::checked_solve(gram, delta, ErrorCode::SingularShift, "delta delta^*");  // L^* = (dd*)^{-1} d
    const ComplexMatrix l = left.adjoint();
    FunctionHandle plus{f.d, static_cast<int>(r), static_cast<int>(r), f.domain,
                        [f, beta, left, l](const Point& zeta) { return ComplexMatrix(left * (f(zeta) - beta) * l); }};

    auto require = [&](const Point& zeta) {
        const ComplexMatrix fz = f(zeta);
        const ComplexMatrix rebuilt = beta + delta.adjoint() * plus(zeta) * delta;
        const double diff = norm(ComplexMatrix(rebuilt - fz));
        if (diff > tol.identity_atol * std::max(1.0, norm(fz))) {
            throw Error(ErrorCode::KernelNotConstant,
                        "F - beta leaves the range of delta^* at " + format_point(zeta) + " (" + sci(diff) + ")");
        }
    };
    const ComplexMatrix at_zero = plus(Point::Zero(f.d));
    const double center = norm(ComplexMatrix(at_zero - identity(r)));
    if (center > tol.identity_atol * std::max(1.0, norm(at_zero))) {
        throw Error(ErrorCode::KernelNotConstant, "F_+(0) differs from I by " + sci(center));
    }
    for (const Point& zeta : polydisk_points(f.d, checks, seed)) {
        try {
            require(zeta);
        } catch (const Error& e) {
            if (!e.is_singular()) throw;
        }
    }
    return plus;
}

HerglotzRealization schur_to_herglotz(const realization::GivoneRoesserRealization& re, const ComplexMatrix& beta,
                                      const ComplexMatrix& delta, const Tolerances& tol) {
    const int r = re.n();
    if (delta.rows() != r || beta.rows() != delta.cols() || beta.cols() != delta.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "realization, beta and delta shapes disagree");
    }
    const double u_defect = norm(ComplexMatrix(re.u().adjoint() * re.u() - identity(re.m() + r)));
    if (u_defect > tol.identity_atol) throw Error(ErrorCode::NotUnitaryW, "colligation is not unitary: " + sci(u_defect));
    const double d_norm = norm(ComplexMatrix(re.dd()));
    if (d_norm > tol.identity_atol) throw Error(ErrorCode::NonzeroD, "||D|| = " + sci(d_norm));

    const ComplexMatrix w = (re.a() + re.b() * re.c()).adjoint();
    const double w_defect = norm(ComplexMatrix(w.adjoint() * w - identity(re.m())));
    if (w_defect > tol.identity_atol) throw Error(ErrorCode::NotUnitaryW, "||W^*W - I|| = " + sci(w_defect));
    const double b_defect = norm(ComplexMatrix(re.b().adjoint() * re.b() - identity(r)));
    if (b_defect > tol.identity_atol) throw Error(ErrorCode::NotUnitaryW, "||B^*B - I|| = " + sci(b_defect));

    HerglotzRealization h(re.state_dims(), beta, w, re.b() * delta, tol);

    // beta + delta^* F_+ delta with F_+ the value Cayley transform of the colligation.
    for (const Point& zeta : polydisk_points(re.d(), 10, 0x4e7a)) {
        try {
            const ComplexMatrix schur = realization::eval_transfer(re, zeta);
            const ComplexMatrix plus = cayley::value_cayley(schur, cayley::ValueDirection::schur_to_herglotz);
            const ComplexMatrix expected = beta + delta.adjoint() * plus * delta;
            const double diff = norm(ComplexMatrix(eval_herglotz(h, zeta) - expected));
            if (diff > tol.identity_atol * std::max(1.0, norm(expected))) {
                throw Error(ErrorCode::Internal, "Herglotz realization misses F at " + format_point(zeta) + " by " + sci(diff));
            }
        } catch (const Error& e) {
            if (!e.is_singular()) throw;
        }
    }
    return h;
}

std::vector<FunctionHandle> xi_functions(const HerglotzRealization& h) {
    std::vector<FunctionHandle> out;
    int offset = 0;
    for (int k = 0; k < h.d(); ++k) {
        const int mk = h.state_dims()[static_cast<std::size_t>(k)];
        out.push_back(FunctionHandle{h.d(), mk, h.n(), Domain::polydisk, [h, offset, mk](const Point& zeta) {
                                         const ComplexMatrix lhs = identity(h.m()) - h.w().adjoint() * h.variable_matrix(zeta);
                                         const ComplexMatrix x = numerics::checked_solve(
                                             lhs, h.v(), ErrorCode::ResolventSingular,
                                             "I - W^* P(zeta) at " + format_point(zeta));
                                         return ComplexMatrix(std::sqrt(2.0) * x.middleRows(offset, mk));
                                     }});
        offset += mk;
    }
    return out;
}

}  // namespace agler::herglotz
