#include <doctest.h>

#include "agler/aglerkit.hpp"
#include "agler/realization.hpp"
#include "agler/verify.hpp"
#include "support.hpp"

using namespace agler;
using namespace agler::testing;
using poly::MatrixPolynomial;

namespace {

MatrixPolynomial random_family(Rng& rng, int d, int rows, int cols, int degree) {
    MatrixPolynomial p(d, rows, cols);
    for (const auto& alpha : poly::multi_indices_up_to(d, degree)) p.add_term(alpha, rng.complex_matrix(rows, cols));
    return p;
}

/// Independent pointwise check of psi(w)^* psi(z) = xi(w)^* xi(z).
double kernel_gap(const MatrixPolynomial& a, const MatrixPolynomial& b, std::uint64_t seed) {
    double worst = 0.0;
    const auto pts = polydisk_points(a.d(), 20, seed, 1.2);
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
        const ComplexMatrix ka = poly::poly_eval(a, pts[i]).adjoint() * poly::poly_eval(a, pts[i + 1]);
        const ComplexMatrix kb = poly::poly_eval(b, pts[i]).adjoint() * poly::poly_eval(b, pts[i + 1]);
        worst = std::max(worst, dist(ka, kb) / std::max(1.0, numerics::norm(kb)));
    }
    return worst;
}

}  // namespace

TEST_CASE("verify_knese on the one-variable identity") {
    const auto v = aglerkit::verify_knese(mono({0}, 1.0), mono({1}, 1.0), {mono({0}, 1.0)});
    CHECK(v.residual == 0.0);
    CHECK(v.verdict);
}

TEST_CASE("verify_knese on the two-variable witness") {
    const auto ex = knese_example();
    const auto v = aglerkit::verify_knese(ex.p, ex.q, ex.psis);
    CHECK(v.residual <= 1e-12);
    CHECK(v.verdict);

    // Pointwise oracle, independent of the coefficient bookkeeping.
    for (const Point& w : polydisk_points(2, 10, 1)) {
        for (const Point& z : polydisk_points(2, 10, 2)) {
            const Complex pw = 2.0 - w[0] - w[1], pz = 2.0 - z[0] - z[1];
            const Complex lhs = std::conj(pw) * pz - std::conj(knese_value(w) * pw) * (knese_value(z) * pz);
            const Complex rhs = (1.0 - std::conj(w[0]) * z[0]) * 2.0 * std::conj(1.0 - w[1]) * (1.0 - z[1]) +
                                (1.0 - std::conj(w[1]) * z[1]) * 2.0 * std::conj(1.0 - w[0]) * (1.0 - z[0]);
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }
}

TEST_CASE("verify_knese detects a perturbed witness") {
    auto ex = knese_example();
    ex.psis[1] = Complex(1.1) * ex.psis[1];
    const auto v = aglerkit::verify_knese(ex.p, ex.q, ex.psis);
    // The extra term 0.21 (1 - conj(w2) z2) psi_2(w)^* psi_2(z) has coefficients 0.21 * 2 * (+-1).
    CHECK(v.residual == doctest::Approx(0.21 * 2.0).epsilon(1e-12));
    CHECK_FALSE(v.verdict);
}

TEST_CASE("verify_knese is invariant under left-unitary changes of psi") {
    const auto ex = knese_example();
    Rng rng(4);
    std::vector<MatrixPolynomial> stacked;
    for (const auto& psi : ex.psis) {
        // pad to two rows with a zero row, then rotate
        MatrixPolynomial tall(2, 2, 1);
        for (const auto& [alpha, c] : psi.terms()) tall.add_term(alpha, mat({{c(0, 0)}, {0}}));
        const MatrixPolynomial omega = MatrixPolynomial::constant(2, verify::random_unitary(rng, 2));
        stacked.push_back(omega * tall);
    }
    CHECK(aglerkit::verify_knese(ex.p, ex.q, stacked).residual <= 1e-12);
}

TEST_CASE("verify_knese rejects inconsistent shapes") {
    const auto ex = knese_example();
    CHECK_THROWS_AS(aglerkit::verify_knese(ex.p, ex.q, {ex.psis[0]}), Error);
    CHECK_THROWS_AS(aglerkit::verify_knese(ex.p, mono({1}, 1.0), ex.psis), Error);
}

TEST_CASE("compression_bound") {
    CHECK(aglerkit::compression_bound(2, 1, 1) == 3);
    CHECK(aglerkit::compression_bound(1, 0, 4) == 4);
    CHECK(aglerkit::compression_bound(3, 2, 2) == 20);
}

TEST_CASE("compress_sos examples") {
    const MatrixPolynomial xi = MatrixPolynomial::constant(1, mat({{1}, {1}}));
    const auto psi = aglerkit::compress_sos({xi}, 0);
    REQUIRE(psi.size() == 1);
    CHECK(psi[0].rows() == 1);
    CHECK(std::abs(std::abs(poly::poly_eval(psi[0], pt({0.3}))(0, 0)) - std::sqrt(2.0)) < 1e-14);

    // orthogonal coefficient rows: rank preserved, kernel unchanged
    MatrixPolynomial minimal(2, 2, 1);
    minimal.add_term(poly::MultiIndex({0, 0}), mat({{1}, {0}}));
    minimal.add_term(poly::MultiIndex({1, 0}), mat({{0}, {2}}));
    const auto same = aglerkit::compress_sos({minimal, MatrixPolynomial(2, 0, 1)}, 1);
    CHECK(same[0].rows() == 2);
    CHECK(same[1].rows() == 0);
    CHECK(kernel_gap(same[0], minimal, 3) <= 1e-12);

    // Knese witness: N_k <= binom(1 + 2, 2) * 1 = 3 and the identity survives
    const auto ex = knese_example();
    const auto compressed = aglerkit::compress_sos(ex.psis, 1);
    for (const auto& p : compressed) CHECK(p.rows() <= 3);
    CHECK(aglerkit::verify_knese(ex.p, ex.q, compressed).verdict);

    CHECK_THROWS_AS(aglerkit::compress_sos({ex.q}, 1), Error);
}

TEST_CASE("compress_sos respects the rank bound on random families") {
    Rng rng(31337);
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + trial % 3;
        const int n = 1 + trial % 2;
        const int degree = trial % 3;
        const auto bound = aglerkit::compression_bound(d, degree, n);
        std::vector<MatrixPolynomial> xis;
        for (int k = 0; k < d; ++k) {
            const int rows = static_cast<int>(bound) + 1 + static_cast<int>(rng.next() % 4);
            xis.push_back(random_family(rng, d, rows, n, degree));
        }
        const auto psis = aglerkit::compress_sos(xis, degree);
        for (int k = 0; k < d; ++k) {
            const auto& psi = psis[static_cast<std::size_t>(k)];
            CHECK(psi.rows() <= bound);
            CHECK(psi.rows() <= xis[static_cast<std::size_t>(k)].rows());
            CHECK(kernel_gap(psi, xis[static_cast<std::size_t>(k)], 100 + static_cast<std::uint64_t>(trial)) <= 1e-9);
            // idempotent in N_k
            CHECK(aglerkit::compress_sos({psi}, degree)[0].rows() == psi.rows());
        }
    }
}

TEST_CASE("inner_check") {
    const SamplePlan torus{SampleDomain::torus, 5, 200};
    const FunctionHandle mono2 = scalar_handle(2, Domain::polydisk, [](const Point& z) { return z[0] * z[1]; });
    for (const auto& r : aglerkit::inner_check(mono2, torus)) {
        CHECK(r.max_residual < 1e-14);
        CHECK(r.verdict);
    }
    const FunctionHandle constant{1, 2, 2, Domain::polydisk, [](const Point&) { return mat({{0, I}, {1, 0}}); }};
    for (const auto& r : aglerkit::inner_check(constant, torus)) CHECK(r.max_residual < 1e-15);

    const FunctionHandle half = scalar_handle(1, Domain::polydisk, [](const Point& z) { return z[0] / 2.0; });
    const auto reports = aglerkit::inner_check(half, torus);
    CHECK(reports[0].name == "inner_torus");
    CHECK(reports[0].max_residual == doctest::Approx(0.75));
    CHECK_FALSE(reports[0].verdict);
    CHECK_FALSE(reports[1].verdict);
}

TEST_CASE("torus samples avoid the pole of the Knese example") {
    // q p^{-1} has its only torus singularity at (1, 1); grid points near it are skipped
    const auto ex = knese_example();
    const FunctionHandle f = poly::right_quotient(ex.q, ex.p, Domain::polydisk);
    const auto reports = aglerkit::inner_check(f, SamplePlan{SampleDomain::torus, 0, 200});
    CHECK(reports[0].sample_count + reports[0].skipped == 200);
    for (const auto& r : reports) CHECK(r.verdict);
}
