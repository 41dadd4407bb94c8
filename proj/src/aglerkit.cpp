#include "agler/aglerkit.hpp"

#include <map>
#include <utility>

#include "agler/numerics.hpp"

namespace agler::aglerkit {

using poly::MatrixPolynomial;
using poly::MultiIndex;

namespace {

struct PairOrder {
    bool operator()(const std::pair<MultiIndex, MultiIndex>& a, const std::pair<MultiIndex, MultiIndex>& b) const {
        poly::GradedLex lex;
        if (lex(a.first, b.first)) return true;
        if (lex(b.first, a.first)) return false;
        return lex(a.second, b.second);
    }
};

/// Coefficients of a polynomial in (conj w, z), keyed by (beta, alpha).
using Bilinear = std::map<std::pair<MultiIndex, MultiIndex>, ComplexMatrix, PairOrder>;

void accumulate(Bilinear& target, const MultiIndex& beta, const MultiIndex& alpha, const ComplexMatrix& value) {
    auto [it, inserted] = target.try_emplace({beta, alpha}, value);
    if (!inserted) it->second += value;
}

/// sign * (a(w)^* b(z)) shifted by conj(w)^shift z^shift.
void add_product(Bilinear& target, const MatrixPolynomial& a, const MatrixPolynomial& b, Complex sign,
                 const MultiIndex& shift) {
    for (const auto& [beta, ab] : a.terms()) {
        for (const auto& [alpha, bb] : b.terms()) {
            accumulate(target, beta + shift, alpha + shift, sign * (ab.adjoint() * bb));
        }
    }
}

}  // namespace

KneseVerdict verify_knese(const MatrixPolynomial& p, const MatrixPolynomial& q, const std::vector<MatrixPolynomial>& psis,
                          const Tolerances& tol) {
    const int d = p.d();
    const int n = p.cols();
    if (p.rows() != n || q.rows() != n || q.cols() != n || q.d() != d) {
        throw Error(ErrorCode::DimensionMismatch, "p and q must be n x n polynomials in the same variables");
    }
    if (static_cast<int>(psis.size()) != d) throw Error(ErrorCode::DimensionMismatch, "need one psi per variable");
    for (const auto& psi : psis) {
        if (psi.d() != d || psi.cols() != n) throw Error(ErrorCode::DimensionMismatch, "psi_k must be N_k x n");
    }
    Bilinear defect;
    const MultiIndex zero = MultiIndex::zero(d);
    add_product(defect, p, p, 1.0, zero);
    add_product(defect, q, q, -1.0, zero);
    for (int k = 0; k < d; ++k) {
        const auto& psi = psis[static_cast<std::size_t>(k)];
        add_product(defect, psi, psi, -1.0, zero);
        add_product(defect, psi, psi, 1.0, MultiIndex::unit(d, k));
    }
    KneseVerdict out;
    for (const auto& [key, value] : defect) out.residual = std::max(out.residual, numerics::norm(value));
    out.verdict = out.residual <= tol.identity_atol;
    return out;
}

long long compression_bound(int d, int degree_bound, int n) {
    // binom(degree_bound + d, d)
    long long c = 1;
    for (int i = 1; i <= d; ++i) c = c * (degree_bound + i) / i;
    return c * n;
}

std::vector<MatrixPolynomial> compress_sos(const std::vector<MatrixPolynomial>& xis, int degree_bound,
                                           const Tolerances& tol) {
    std::vector<MatrixPolynomial> out;
    for (const auto& xi : xis) {
        if (poly::total_degree(xi) > degree_bound) {
            throw Error(ErrorCode::InvalidArgument, "factor degree exceeds the stated bound");
        }
        const int d = xi.d();
        const int n = xi.cols();
        const auto indices = poly::multi_indices_up_to(d, degree_bound);
        const auto count = static_cast<Eigen::Index>(indices.size());
        // Stacked coefficients [xi_alpha_1, xi_alpha_2, ...]; X = C^* C.
        ComplexMatrix stacked(xi.rows(), count * n);
        for (Eigen::Index j = 0; j < count; ++j) {
            stacked.middleCols(j * n, n) = xi.coefficient(indices[static_cast<std::size_t>(j)]);
        }
        ComplexMatrix moment = stacked.adjoint() * stacked;
        moment = (moment + moment.adjoint()) / 2.0;
        const ComplexMatrix y = numerics::rank_factor_psd(moment, tol);

        MatrixPolynomial psi(d, static_cast<int>(y.rows()), n);
        for (Eigen::Index j = 0; j < count; ++j) {
            psi.add_term(indices[static_cast<std::size_t>(j)], y.middleCols(j * n, n));
        }
        // Kernel equality, coefficientwise.
        Bilinear diff;
        add_product(diff, psi, psi, 1.0, MultiIndex::zero(d));
        add_product(diff, xi, xi, -1.0, MultiIndex::zero(d));
        const double scale = std::max(1.0, numerics::norm(moment));
        for (const auto& [key, value] : diff) {
            if (numerics::norm(value) > tol.identity_atol * scale) {
                throw Error(ErrorCode::Internal, "compressed factor changes the kernel");
            }
        }
        out.push_back(std::move(psi));
    }
    return out;
}

std::vector<SampleReport> inner_check(const FunctionHandle& f, const SamplePlan& torus_plan, double threshold) {
    if (f.rows != f.cols) throw Error(ErrorCode::DimensionMismatch, "inner_check needs a square function");
    SamplePlan plan = torus_plan;
    plan.domain = SampleDomain::torus;
    const auto points = expand(plan, f.d);
    const ComplexMatrix id = numerics::identity(f.rows);

    ReportBuilder torus("inner_torus", threshold);
    ReportBuilder continuation("inner_continuation", threshold);
    for (const Point& mu : points) {
        try {
            const ComplexMatrix v = f(mu);
            torus.record(numerics::norm(ComplexMatrix(v.adjoint() * v - id)), mu);
        } catch (const Error& e) {
            if (!e.is_singular()) throw;
            torus.skip();
        }
        const Point w = 0.8 * mu;
        const Point reflected = w.cwiseInverse().conjugate();
        try {
            const ComplexMatrix v = f(reflected).adjoint() * f(w);
            continuation.record(numerics::norm(ComplexMatrix(v - id)), w);
        } catch (const Error& e) {
            if (!e.is_singular()) throw;
            continuation.skip();
        }
    }
    return {torus.finish(), continuation.finish()};
}

}  // namespace agler::aglerkit
