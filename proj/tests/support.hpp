#pragma once

// Small builders shared by the test binaries.

#include <cmath>
#include <initializer_list>
#include <vector>

#include <doctest.h>

#include "agler/bessmertnyi.hpp"
#include "agler/numerics.hpp"
#include "agler/polyalg.hpp"
#include "agler/realization.hpp"

namespace agler::testing {

inline const Complex I{0.0, 1.0};

inline Point pt(std::initializer_list<Complex> coords) {
    Point p(static_cast<Eigen::Index>(coords.size()));
    Eigen::Index k = 0;
    for (Complex c : coords) p[k++] = c;
    return p;
}

inline ComplexMatrix mat(std::initializer_list<std::initializer_list<Complex>> rows) {
    const auto r = static_cast<Eigen::Index>(rows.size());
    const auto c = r == 0 ? 0 : static_cast<Eigen::Index>(rows.begin()->size());
    ComplexMatrix m(r, c);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (Complex v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

inline ComplexMatrix scalar(Complex v) { return ComplexMatrix::Constant(1, 1, v); }

inline double dist(const ComplexMatrix& a, const ComplexMatrix& b) { return numerics::norm(ComplexMatrix(a - b)); }

/// U = [[0, 1], [1, 0]] with one state: F(zeta) = zeta.
inline realization::GivoneRoesserRealization swap_colligation() {
    return realization::GivoneRoesserRealization(1, {1}, mat({{0, 1}, {1, 0}}),
                                                 realization::StructureFlags{true, true, true});
}

/// A0 = 0, A1 = [[1, -1], [-1, 1]], A2 = [[0, 0], [0, 1]]: f(z) = z1 z2 / (z1 + z2).
inline bessmertnyi::LongResolventPencil parallel_pencil() {
    return bessmertnyi::LongResolventPencil(
        1, {ComplexMatrix::Zero(2, 2), mat({{1, -1}, {-1, 1}}), mat({{0, 0}, {0, 1}})},
        bessmertnyi::PencilClass::real_homogeneous);
}

inline Complex parallel_value(const Point& z) { return z[0] * z[1] / (z[0] + z[1]); }

/// p = 2 - z1 - z2, q = 2 z1 z2 - z1 - z2 and the psi pair sqrt(2)(1 - z2), sqrt(2)(1 - z1).
struct KneseExample {
    poly::MatrixPolynomial p, q;
    std::vector<poly::MatrixPolynomial> psis;
};

inline poly::MatrixPolynomial mono(std::vector<int> e, Complex c) {
    return poly::MatrixPolynomial::monomial(poly::MultiIndex(std::move(e)), scalar(c));
}

inline KneseExample knese_example() {
    const double r2 = std::sqrt(2.0);
    KneseExample ex;
    ex.p = mono({0, 0}, 2.0) + mono({1, 0}, -1.0) + mono({0, 1}, -1.0);
    ex.q = mono({1, 1}, 2.0) + mono({1, 0}, -1.0) + mono({0, 1}, -1.0);
    ex.psis = {mono({0, 0}, r2) + mono({0, 1}, -r2), mono({0, 0}, r2) + mono({1, 0}, -r2)};
    return ex;
}

/// (2 z1 z2 - z1 - z2) / (2 - z1 - z2), evaluated directly.
inline Complex knese_value(const Point& z) { return (2.0 * z[0] * z[1] - z[0] - z[1]) / (2.0 - z[0] - z[1]); }

inline FunctionHandle scalar_handle(int d, Domain domain, std::function<Complex(const Point&)> f) {
    return FunctionHandle{d, 1, 1, domain, [f](const Point& z) { return scalar(f(z)); }};
}

}  // namespace agler::testing
