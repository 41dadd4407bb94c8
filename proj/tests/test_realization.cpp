#include <doctest.h>

#include "agler/realization.hpp"
#include "agler/sampling.hpp"
#include "agler/synthesis.hpp"
#include "agler/verify.hpp"
#include "support.hpp"

using namespace agler;
using namespace agler::testing;
using realization::GivoneRoesserRealization;
using realization::StructureFlags;

namespace {

GivoneRoesserRealization random_unitary_gr(std::uint64_t seed, int n, std::vector<int> dims) {
    Rng rng(seed);
    int m = 0;
    for (int k : dims) m += k;
    return GivoneRoesserRealization(n, std::move(dims), verify::random_unitary(rng, m + n), StructureFlags{});
}

std::vector<FunctionHandle> knese_thetas() {
    const double r2 = std::sqrt(2.0);
    return {scalar_handle(2, Domain::polydisk, [r2](const Point& z) { return r2 * (1.0 - z[1]) / (2.0 - z[0] - z[1]); }),
            scalar_handle(2, Domain::polydisk, [r2](const Point& z) { return r2 * (1.0 - z[0]) / (2.0 - z[0] - z[1]); })};
}

}  // namespace

TEST_CASE("constructor enforces structure flags") {
    CHECK_NOTHROW(swap_colligation());
    try {
        GivoneRoesserRealization(1, {1}, mat({{0, 2}, {1, 0}}), StructureFlags{});
        FAIL("expected NotUnitary");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::NotUnitary);
    }
    try {
        GivoneRoesserRealization(1, {1}, mat({{0, I}, {I, 0}}), StructureFlags{true, true, false});
        FAIL("expected HermitianInfeasible");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::HermitianInfeasible);
    }
    try {
        GivoneRoesserRealization(1, {1}, mat({{0, I}, {-I, 0}}), StructureFlags{true, true, true});
        FAIL("expected RealInfeasible");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::RealInfeasible);
    }
    CHECK_THROWS_AS(GivoneRoesserRealization(1, {2}, mat({{0, 1}, {1, 0}}), StructureFlags{}), Error);
}

TEST_CASE("variable matrix and projectors partition the state space") {
    const auto re = random_unitary_gr(1, 1, {2, 1, 3});
    ComplexMatrix sum = ComplexMatrix::Zero(6, 6);
    for (int k = 0; k < 3; ++k) {
        sum += re.projector(k);
        for (int j = 0; j < 3; ++j) {
            if (j != k) CHECK(numerics::norm(ComplexMatrix(re.projector(k) * re.projector(j))) == 0.0);
        }
    }
    CHECK(dist(sum, numerics::identity(6)) == 0.0);
    const ComplexMatrix p = re.variable_matrix(pt({2, 3, 5}));
    CHECK(p(1, 1) == Complex(2));
    CHECK(p(2, 2) == Complex(3));
    CHECK(p(5, 5) == Complex(5));
}

TEST_CASE("eval_transfer") {
    const auto re = random_unitary_gr(2, 2, {1, 2});
    CHECK(dist(realization::eval_transfer(re, pt({0, 0})), ComplexMatrix(re.dd())) == 0.0);
    CHECK(std::abs(realization::eval_transfer(swap_colligation(), pt({0.3}))(0, 0) - 0.3) < 1e-15);
    for (Complex zeta : {Complex(0.5), Complex(0, 0.5)}) {
        CHECK(std::abs(realization::eval_transfer(swap_colligation(), pt({zeta}))(0, 0) - zeta) < 1e-15);
    }
    // A = 1 with zeta = 1 makes I - P A singular
    const GivoneRoesserRealization pole(1, {1}, mat({{1, 0}, {0, 1}}), StructureFlags{});
    try {
        realization::eval_transfer(pole, pt({1.0}));
        FAIL("expected ResolventSingular");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::ResolventSingular);
    }
}

TEST_CASE("eval_transfer_tuple") {
    const auto re = random_unitary_gr(3, 2, {1, 2});
    const Point zeta = pt({Complex(0.2, 0.3), -0.4});
    const cayley::TupleOfMatrices scalars({scalar(zeta[0]), scalar(zeta[1])});
    CHECK(dist(realization::eval_transfer_tuple(re, scalars), realization::eval_transfer(re, zeta)) < 1e-14);

    // common diagonal: block diagonal of pointwise values (I_n (x) I_s ordering)
    const Point other = pt({0.1, Complex(0, -0.6)});
    const cayley::TupleOfMatrices diag({mat({{zeta[0], 0}, {0, other[0]}}), mat({{zeta[1], 0}, {0, other[1]}})});
    const ComplexMatrix value = realization::eval_transfer_tuple(re, diag);
    const ComplexMatrix a = realization::eval_transfer(re, zeta);
    const ComplexMatrix b = realization::eval_transfer(re, other);
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            CHECK(std::abs(value(2 * i, 2 * j) - a(i, j)) < 1e-14);
            CHECK(std::abs(value(2 * i + 1, 2 * j + 1) - b(i, j)) < 1e-14);
            CHECK(std::abs(value(2 * i, 2 * j + 1)) < 1e-14);
        }
    }

    const auto t = verify::random_commuting_contractions(9, 1, 3);
    CHECK(dist(realization::eval_transfer_tuple(swap_colligation(), t), t[0]) < 1e-14);

    try {
        realization::eval_transfer_tuple(swap_colligation(), cayley::TupleOfMatrices({scalar(1.0)}));
        FAIL("expected NotStrictContraction");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::NotStrictContraction);
    }
}

TEST_CASE("defect_functions") {
    const auto thetas = realization::defect_functions(swap_colligation());
    REQUIRE(thetas.size() == 1);
    for (Complex zeta : {Complex(0), Complex(0.4), Complex(0.1, -0.7)}) {
        CHECK(std::abs(thetas[0](pt({zeta}))(0, 0) - 1.0) < 1e-15);
    }
    const auto re = random_unitary_gr(4, 2, {2, 1});
    const auto th = realization::defect_functions(re);
    CHECK(dist(th[0](pt({0, 0})), ComplexMatrix(re.projector(0).topRows(2) * re.b())) < 1e-15);
    CHECK(dist(th[1](pt({0, 0})), ComplexMatrix(re.projector(1).bottomRows(1) * re.b())) < 1e-15);
}

TEST_CASE("unitary colligations satisfy the defect identities") {
    for (std::uint64_t seed = 10; seed < 40; ++seed) {
        const int d = 1 + static_cast<int>(seed % 3);
        std::vector<int> dims;
        for (int k = 0; k < d; ++k) dims.push_back(static_cast<int>((seed + static_cast<std::uint64_t>(k)) % 3));
        const auto re = random_unitary_gr(seed, 1 + static_cast<int>(seed % 2), dims);
        const auto report = realization::agler_decomposition_check(re, 100, seed);
        CHECK(report.verdict);
        CHECK(report.max_residual <= 1e-9);

        // energy balance at omega = zeta and contractivity
        const auto th = realization::defect_functions(re);
        for (const Point& zeta : polydisk_points(d, 20, seed + 1000)) {
            const ComplexMatrix f = realization::eval_transfer(re, zeta);
            ComplexMatrix rhs = ComplexMatrix::Zero(re.n(), re.n());
            for (int k = 0; k < d; ++k) {
                rhs += (1.0 - std::norm(zeta[k])) * (th[static_cast<std::size_t>(k)](zeta).adjoint() *
                                                      th[static_cast<std::size_t>(k)](zeta));
            }
            CHECK(dist(ComplexMatrix(numerics::identity(re.n()) - f.adjoint() * f), rhs) <= 1e-9);
            CHECK(numerics::norm(f) <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("Hermitian colligations satisfy the difference identity") {
    Rng rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const ComplexMatrix q = verify::random_unitary(rng, 4);
        Eigen::VectorXcd signs(4);
        signs << 1.0, -1.0, (trial % 2 ? 1.0 : -1.0), 1.0;
        const GivoneRoesserRealization re(1, {2, 1}, q * signs.asDiagonal() * q.adjoint(), StructureFlags{true, true, false});
        CHECK(realization::difference_identity_check(re, 100, 5 + static_cast<std::uint64_t>(trial)).max_residual <= 1e-9);
    }
}

TEST_CASE("lurking_isometry recovers the swap colligation") {
    const FunctionHandle f = scalar_handle(1, Domain::polydisk, [](const Point& z) { return z[0]; });
    const FunctionHandle one = scalar_handle(1, Domain::polydisk, [](const Point&) { return Complex(1.0); });
    realization::LurkingOptions opts;
    opts.hermitian = true;
    const auto re = realization::lurking_isometry(f, {one}, opts);
    CHECK(dist(re.u(), mat({{0, 1}, {1, 0}})) < 1e-12);
    CHECK(re.flags().hermitian);
    CHECK(std::abs(re.dd()(0, 0)) < 1e-12);
}

TEST_CASE("lurking_isometry with an empty state space") {
    const FunctionHandle empty{1, 0, 1, Domain::polydisk, [](const Point&) { return ComplexMatrix(0, 1); }};
    // a constant unimodular F needs no state: U = D = F(0)
    const FunctionHandle rotation = scalar_handle(1, Domain::polydisk, [](const Point&) { return I; });
    const auto re = realization::lurking_isometry(rotation, {empty});
    CHECK(re.m() == 0);
    CHECK(dist(re.u(), scalar(I)) < 1e-15);
    CHECK(std::abs(realization::eval_transfer(re, pt({0.7}))(0, 0) - I) < 1e-15);

    // F = 0 has I - F^*F = I, which no empty decomposition reproduces
    const FunctionHandle zero = scalar_handle(1, Domain::polydisk, [](const Point&) { return Complex(0.0); });
    try {
        realization::lurking_isometry(zero, {empty});
        FAIL("expected GramMismatch");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::GramMismatch);
    }
}

TEST_CASE("lurking_isometry on the two-variable Knese example") {
    const FunctionHandle f = scalar_handle(2, Domain::polydisk, knese_value);
    realization::LurkingOptions opts;
    opts.plan.seed = 12;
    const auto re = realization::lurking_isometry(f, knese_thetas(), opts);
    CHECK(re.state_dims() == std::vector<int>{1, 1});
    CHECK(dist(ComplexMatrix(re.u().adjoint() * re.u()), numerics::identity(3)) <= 1e-12);
    double worst = 0.0;
    for (const Point& zeta : polydisk_points(2, 100, 0xF00D)) {
        worst = std::max(worst, std::abs(realization::eval_transfer(re, zeta)(0, 0) - knese_value(zeta)));
    }
    CHECK(worst <= 1e-8);

    const auto reports = realization::verify_realization(re, f, SamplePlan{SampleDomain::polydisk, 77, 100});
    for (const auto& r : reports) CHECK_MESSAGE(r.verdict, r.name);
}

TEST_CASE("lurking_isometry rejects inconsistent data") {
    const FunctionHandle f = scalar_handle(1, Domain::polydisk, [](const Point& z) { return z[0]; });
    const FunctionHandle wrong = scalar_handle(1, Domain::polydisk, [](const Point&) { return Complex(1.3); });
    try {
        realization::lurking_isometry(f, {wrong});
        FAIL("expected GramMismatch");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::GramMismatch);
        CHECK(std::string(err.what()).find("marginal") == std::string::npos);
    }
    // a defect just above identity_atol is flagged as marginal
    const FunctionHandle close = scalar_handle(1, Domain::polydisk, [](const Point&) { return Complex(1.0 + 2e-9); });
    try {
        realization::lurking_isometry(f, {close});
        FAIL("expected GramMismatch");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::GramMismatch);
        CHECK(std::string(err.what()).find("marginal") != std::string::npos);
    }
    // Gram-matched but the cross-Gram is not Hermitian: F(zeta) = i zeta, theta = 1
    const FunctionHandle rotated = scalar_handle(1, Domain::polydisk, [](const Point& z) { return I * z[0]; });
    const FunctionHandle one = scalar_handle(1, Domain::polydisk, [](const Point&) { return Complex(1.0); });
    realization::LurkingOptions herm;
    herm.hermitian = true;
    try {
        realization::lurking_isometry(rotated, {one}, herm);
        FAIL("expected HermitianInfeasible");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::HermitianInfeasible);
    }
    realization::LurkingOptions real;
    real.real = true;
    try {
        realization::lurking_isometry(rotated, {one}, real);
        FAIL("expected RealInfeasible");
    } catch (const Error& err) {
        CHECK(err.code() == ErrorCode::RealInfeasible);
    }
}

TEST_CASE("verify_realization") {
    const FunctionHandle f = scalar_handle(1, Domain::polydisk, [](const Point& z) { return z[0]; });
    const SamplePlan plan{SampleDomain::polydisk, 3, 100};
    const auto good = realization::verify_realization(swap_colligation(), f, plan);
    REQUIRE(good.size() == 4);
    CHECK(good[0].name == "transfer_match");
    CHECK(good[0].max_residual <= 1e-12);
    CHECK(good[1].name == "unitarity");
    CHECK(good[1].max_residual == 0.0);
    for (const auto& r : good) CHECK(r.verdict);

    const GivoneRoesserRealization perturbed(1, {1}, mat({{0, 1}, {1, 1e-3}}), StructureFlags{false, false, false});
    const auto bad = realization::verify_realization(perturbed, f, plan);
    CHECK(bad[0].max_residual > 1e-4);
    CHECK_FALSE(bad[0].verdict);
    CHECK_FALSE(bad[1].verdict);
}

TEST_CASE("synthesized realizations reproduce F at fresh points") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto pencil = verify::random_pencil(bessmertnyi::PencilClass::nonhomogeneous, seed, 2, 2, 2);
        std::vector<SampleReport> reports;
        synthesis::Options opts;
        opts.seed = seed;
        synthesis::pencil_to_gr(pencil, opts, {}, &reports);
        for (const auto& r : reports) CHECK_MESSAGE(r.verdict, r.name << " " << r.max_residual);
    }
}
