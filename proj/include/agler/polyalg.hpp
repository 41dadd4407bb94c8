#pragma once

// Multivariate polynomials with matrix coefficients.

#include <map>
#include <vector>

#include "agler/core.hpp"

namespace agler::poly {

/// Exponent vector alpha of a monomial z^alpha.
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> exponents);

    static MultiIndex zero(int d) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(d), 0)); }
    static MultiIndex unit(int d, int k);

    int size() const { return static_cast<int>(exponents_.size()); }
    int operator[](int k) const { return exponents_[static_cast<std::size_t>(k)]; }
    int total_degree() const;
    const std::vector<int>& exponents() const { return exponents_; }

    MultiIndex operator+(const MultiIndex& other) const;
    bool operator==(const MultiIndex& other) const = default;

    /// z^alpha.
    Complex monomial(const Point& z) const;

private:
    std::vector<int> exponents_;
};

/// Graded lexicographic order: total degree first, then lexicographic with the
/// first variable most significant.
struct GradedLex {
    bool operator()(const MultiIndex& a, const MultiIndex& b) const;
};

/// All multi-indices of total degree <= max_degree in d variables, graded-lex.
std::vector<MultiIndex> multi_indices_up_to(int d, int max_degree);

class MatrixPolynomial {
public:
    using TermMap = std::map<MultiIndex, ComplexMatrix, GradedLex>;

    MatrixPolynomial() = default;
    MatrixPolynomial(int d, int rows, int cols);

    static MatrixPolynomial constant(int d, const ComplexMatrix& value);
    static MatrixPolynomial monomial(const MultiIndex& alpha, const ComplexMatrix& coefficient);
    /// Scalar polynomial z_k.
    static MatrixPolynomial variable(int d, int k);

    int d() const { return d_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    /// Adds `coefficient` to the term at alpha; exact-zero results are dropped.
    void add_term(const MultiIndex& alpha, const ComplexMatrix& coefficient);
    ComplexMatrix coefficient(const MultiIndex& alpha) const;

    bool operator==(const MatrixPolynomial& other) const;

private:
    int d_ = 0;
    int rows_ = 0;
    int cols_ = 0;
    TermMap terms_;
};

ComplexMatrix poly_eval(const MatrixPolynomial& p, const Point& z);

/// Entrywise conjugated coefficients: p#(z) = conj(p(conj z)).
MatrixPolynomial poly_sharp(const MatrixPolynomial& p);

enum class PolyOp { add, sub, matmul, scale };

/// `scale` multiplies a by the constant term of the 1x1 polynomial b when b is
/// constant, and otherwise by the scalar polynomial b.
MatrixPolynomial poly_arith(const MatrixPolynomial& a, const MatrixPolynomial& b, PolyOp op);

MatrixPolynomial operator+(const MatrixPolynomial& a, const MatrixPolynomial& b);
MatrixPolynomial operator-(const MatrixPolynomial& a, const MatrixPolynomial& b);
MatrixPolynomial operator*(const MatrixPolynomial& a, const MatrixPolynomial& b);
MatrixPolynomial operator*(Complex c, const MatrixPolynomial& p);

/// Total degree; 0 for the zero polynomial.
int total_degree(const MatrixPolynomial& p);

FunctionHandle to_handle(const MatrixPolynomial& p);

/// Rational handle q(z) p(z)^{-1}; singular denominators raise EvaluationSingular.
FunctionHandle right_quotient(const MatrixPolynomial& q, const MatrixPolynomial& p, Domain domain);

}  // namespace agler::poly
