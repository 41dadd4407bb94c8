#include "agler/polyalg.hpp"

#include <numeric>

#include "agler/numerics.hpp"

namespace agler::poly {

MultiIndex::MultiIndex(std::vector<int> exponents) : exponents_(std::move(exponents)) {
    for (int e : exponents_) {
        if (e < 0) throw Error(ErrorCode::InvalidArgument, "multi-index exponents must be non-negative");
    }
}

MultiIndex MultiIndex::unit(int d, int k) {
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    e.at(static_cast<std::size_t>(k)) = 1;
    return MultiIndex(std::move(e));
}

int MultiIndex::total_degree() const { return std::accumulate(exponents_.begin(), exponents_.end(), 0); }

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
    if (size() != other.size()) throw Error(ErrorCode::DimensionMismatch, "multi-index length mismatch");
    std::vector<int> e(exponents_);
    for (std::size_t k = 0; k < e.size(); ++k) e[k] += other.exponents_[k];
    return MultiIndex(std::move(e));
}

Complex MultiIndex::monomial(const Point& z) const {
    Complex value = 1.0;
    for (int k = 0; k < size(); ++k) {
        for (int p = 0; p < exponents_[static_cast<std::size_t>(k)]; ++p) value *= z[k];
    }
    return value;
}

bool GradedLex::operator()(const MultiIndex& a, const MultiIndex& b) const {
    const int da = a.total_degree();
    const int db = b.total_degree();
    if (da != db) return da < db;
    // Within a degree, larger leading exponents come first (z1 before z2).
    return a.exponents() > b.exponents();
}

std::vector<MultiIndex> multi_indices_up_to(int d, int max_degree) {
    std::vector<MultiIndex> out;
    if (max_degree < 0) return out;
    std::vector<int> e(static_cast<std::size_t>(d), 0);
    // Enumerate the box [0, max_degree]^d and keep the simplex.
    std::function<void(int, int)> rec = [&](int k, int remaining) {
        if (k == d) {
            out.emplace_back(e);
            return;
        }
        for (int p = 0; p <= remaining; ++p) {
            e[static_cast<std::size_t>(k)] = p;
            rec(k + 1, remaining - p);
        }
        e[static_cast<std::size_t>(k)] = 0;
    };
    rec(0, max_degree);
    std::sort(out.begin(), out.end(), GradedLex{});
    return out;
}

MatrixPolynomial::MatrixPolynomial(int d, int rows, int cols) : d_(d), rows_(rows), cols_(cols) {
    if (d < 0 || rows < 0 || cols < 0) throw Error(ErrorCode::InvalidArgument, "negative polynomial dimension");
}

MatrixPolynomial MatrixPolynomial::constant(int d, const ComplexMatrix& value) {
    MatrixPolynomial p(d, static_cast<int>(value.rows()), static_cast<int>(value.cols()));
    p.add_term(MultiIndex::zero(d), value);
    return p;
}

MatrixPolynomial MatrixPolynomial::monomial(const MultiIndex& alpha, const ComplexMatrix& coefficient) {
    MatrixPolynomial p(alpha.size(), static_cast<int>(coefficient.rows()), static_cast<int>(coefficient.cols()));
    p.add_term(alpha, coefficient);
    return p;
}

MatrixPolynomial MatrixPolynomial::variable(int d, int k) {
    return monomial(MultiIndex::unit(d, k), ComplexMatrix::Ones(1, 1));
}

void MatrixPolynomial::add_term(const MultiIndex& alpha, const ComplexMatrix& coefficient) {
    if (alpha.size() != d_) throw Error(ErrorCode::DimensionMismatch, "multi-index length differs from d");
    if (coefficient.rows() != rows_ || coefficient.cols() != cols_) {
        throw Error(ErrorCode::DimensionMismatch, "term coefficient has the wrong shape");
    }
    auto it = terms_.find(alpha);
    if (it == terms_.end()) {
        if (!coefficient.isZero(0.0)) terms_.emplace(alpha, coefficient);
        return;
    }
    it->second += coefficient;
    if (it->second.isZero(0.0)) terms_.erase(it);
}

ComplexMatrix MatrixPolynomial::coefficient(const MultiIndex& alpha) const {
    auto it = terms_.find(alpha);
    if (it == terms_.end()) return ComplexMatrix::Zero(rows_, cols_);
    return it->second;
}

bool MatrixPolynomial::operator==(const MatrixPolynomial& other) const {
    if (d_ != other.d_ || rows_ != other.rows_ || cols_ != other.cols_) return false;
    if (terms_.size() != other.terms_.size()) return false;
    auto a = terms_.begin();
    auto b = other.terms_.begin();
    for (; a != terms_.end(); ++a, ++b) {
        if (!(a->first == b->first) || a->second != b->second) return false;
    }
    return true;
}

ComplexMatrix poly_eval(const MatrixPolynomial& p, const Point& z) {
    if (z.size() != p.d()) throw Error(ErrorCode::DimensionMismatch, "point dimension differs from d");
    ComplexMatrix value = ComplexMatrix::Zero(p.rows(), p.cols());
    for (const auto& [alpha, coeff] : p.terms()) value += alpha.monomial(z) * coeff;
    return value;
}

MatrixPolynomial poly_sharp(const MatrixPolynomial& p) {
    MatrixPolynomial out(p.d(), p.rows(), p.cols());
    for (const auto& [alpha, coeff] : p.terms()) out.add_term(alpha, coeff.conjugate());
    return out;
}

MatrixPolynomial poly_arith(const MatrixPolynomial& a, const MatrixPolynomial& b, PolyOp op) {
    if (a.d() != b.d()) throw Error(ErrorCode::DimensionMismatch, "polynomials in different variable counts");
    switch (op) {
    case PolyOp::add:
    case PolyOp::sub: {
        if (a.rows() != b.rows() || a.cols() != b.cols()) {
            throw Error(ErrorCode::DimensionMismatch, "add/sub needs equal shapes");
        }
        MatrixPolynomial out = a;
        const double sign = op == PolyOp::add ? 1.0 : -1.0;
        for (const auto& [alpha, coeff] : b.terms()) out.add_term(alpha, sign * coeff);
        return out;
    }
    case PolyOp::matmul: {
        if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matmul inner dimensions differ");
        MatrixPolynomial out(a.d(), a.rows(), b.cols());
        for (const auto& [alpha, ca] : a.terms()) {
            for (const auto& [beta, cb] : b.terms()) out.add_term(alpha + beta, ca * cb);
        }
        return out;
    }
    case PolyOp::scale: {
        if (b.rows() != 1 || b.cols() != 1) throw Error(ErrorCode::DimensionMismatch, "scale needs a scalar b");
        MatrixPolynomial out(a.d(), a.rows(), a.cols());
        for (const auto& [alpha, ca] : a.terms()) {
            for (const auto& [beta, cb] : b.terms()) out.add_term(alpha + beta, cb(0, 0) * ca);
        }
        return out;
    }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown polynomial op");
}

MatrixPolynomial operator+(const MatrixPolynomial& a, const MatrixPolynomial& b) {
    return poly_arith(a, b, PolyOp::add);
}
MatrixPolynomial operator-(const MatrixPolynomial& a, const MatrixPolynomial& b) {
    return poly_arith(a, b, PolyOp::sub);
}
MatrixPolynomial operator*(const MatrixPolynomial& a, const MatrixPolynomial& b) {
    return poly_arith(a, b, PolyOp::matmul);
}
MatrixPolynomial operator*(Complex c, const MatrixPolynomial& p) {
    MatrixPolynomial out(p.d(), p.rows(), p.cols());
    for (const auto& [alpha, coeff] : p.terms()) out.add_term(alpha, c * coeff);
    return out;
}

int total_degree(const MatrixPolynomial& p) {
    int degree = 0;
    for (const auto& [alpha, coeff] : p.terms()) degree = std::max(degree, alpha.total_degree());
    return degree;
}

FunctionHandle to_handle(const MatrixPolynomial& p) {
    return FunctionHandle{p.d(), p.rows(), p.cols(), Domain::entire,
                          [p](const Point& z) { return poly_eval(p, z); }};
}

FunctionHandle right_quotient(const MatrixPolynomial& q, const MatrixPolynomial& p, Domain domain) {
    if (p.rows() != p.cols() || q.cols() != p.rows() || q.d() != p.d()) {
        throw Error(ErrorCode::DimensionMismatch, "q p^{-1} needs square p matching q's columns");
    }
    return FunctionHandle{q.d(), q.rows(), q.cols(), domain, [q, p](const Point& z) {
                              const ComplexMatrix pz = poly_eval(p, z);
                              const ComplexMatrix qz = poly_eval(q, z);
                              // X p = q  <=>  p^T X^T = q^T
                              ComplexMatrix xt = numerics::checked_solve(
                                  pz.transpose(), qz.transpose(), ErrorCode::EvaluationSingular,
                                  "denominator singular at " + format_point(z));
                              return ComplexMatrix(xt.transpose());
                          }};
}

}  // namespace agler::poly
