// Acceptance sweep: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <unistd.h>

#include "agler/aglerkit.hpp"
#include "agler/artifact.hpp"
#include "agler/numerics.hpp"
#include "agler/synthesis.hpp"
#include "agler/verify.hpp"
#include "cli.hpp"

using namespace agler;
using bessmertnyi::LongResolventPencil;
using bessmertnyi::PencilClass;
namespace fs = std::filesystem;

namespace {

int failures = 0;

/// Worst value seen plus a flag for anything that threw.
struct Tally {
    double worst = -std::numeric_limits<double>::infinity();
    int errors = 0;
    std::string first_error;

    void see(double v) { worst = std::max(worst, v); }
    void fail(const std::string& what) {
        if (errors++ == 0) first_error = what;
    }
};

void line(int id, const std::string& title, bool pass, const std::string& detail) {
    if (!pass) ++failures;
    std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

std::string errors_suffix(const Tally& t) {
    return t.errors == 0 ? "" : "; " + std::to_string(t.errors) + " errors, first: " + t.first_error;
}

template <typename Body>
void guarded(Tally& t, const std::string& label, Body&& body) {
    try {
        body();
    } catch (const std::exception& e) {
        t.fail(label + ": " + e.what());
    }
}

ComplexMatrix scalar(Complex v) { return ComplexMatrix::Constant(1, 1, v); }

poly::MatrixPolynomial mono(std::vector<int> e, Complex c) {
    return poly::MatrixPolynomial::monomial(poly::MultiIndex(std::move(e)), scalar(c));
}

LongResolventPencil sweep_pencil(PencilClass tag, std::uint64_t i) {
    const int d = 1 + static_cast<int>(i % 3);
    const int n = 1 + static_cast<int>(i / 3 % 3);
    const int m = static_cast<int>(i / 9 % 5);
    return verify::random_pencil(tag, 5000 + i, d, n, m);
}

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "agler");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Synthesized unitary colligations, shared by the defect-identity criterion.
std::vector<realization::GivoneRoesserRealization> synthesized;
std::vector<bool> synthesized_hermitian;

void grand_round_trip() {
    Tally t;
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t i = 0; i < 50; ++i) {
        guarded(t, "pencil " + std::to_string(i), [&] {
            synthesis::Options opts;
            opts.seed = i;
            const auto rt = synthesis::pencil_roundtrip(sweep_pencil(PencilClass::nonhomogeneous, i), opts, {});
            t.see(rt.comparison.max_residual);
            synthesized.push_back(rt.stages.gr);
            synthesized_hermitian.push_back(false);
        });
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    line(1, "grand round trip, 50 nonhomogeneous pencils", t.errors == 0 && t.worst <= 1e-7 && secs < 60.0,
         fmt("max residual %.3g (<= 1e-7), %.1f s (< 60 s)", t.worst, secs) + errors_suffix(t));
}

void homogeneous_structure() {
    Tally t;
    double hermitian_defect = 0.0;
    for (std::uint64_t i = 0; i < 50; ++i) {
        guarded(t, "pencil " + std::to_string(i), [&] {
            synthesis::Options opts;
            opts.seed = i;
            opts.hermitian = true;
            const auto syn = synthesis::pencil_to_herglotz(sweep_pencil(PencilClass::homogeneous, i), opts, {});
            const auto s = bessmertnyi::homogeneous_structure_check(syn.herglotz);
            t.see(std::max({s.beta_norm, s.w_asymmetry, s.range_defect}));
            const ComplexMatrix& u = syn.gr.u();
            hermitian_defect = std::max(hermitian_defect, numerics::norm(ComplexMatrix(u - u.adjoint())));
            synthesized.push_back(syn.gr);
            synthesized_hermitian.push_back(true);
        });
    }
    line(2, "homogeneous structure, 50 homogeneous pencils", t.errors == 0 && t.worst <= 1e-8 && hermitian_defect <= 1e-8,
         fmt("max(||beta||, ||W-W*||, ||(I-QQ*)V||) %.3g (<= 1e-8), ||U-U*|| %.3g (<= 1e-8)", t.worst, hermitian_defect) +
             errors_suffix(t));
}

void real_case() {
    Tally realness, imag, symmetry;
    for (std::uint64_t i = 0; i < 25; ++i) {
        guarded(realness, "pencil " + std::to_string(i), [&] {
            const auto p = sweep_pencil(PencilClass::real_homogeneous, i);
            const auto f = bessmertnyi::pencil_handle(p);
            for (const auto& phi : bessmertnyi::realify_decomposition(bessmertnyi::pencil_decomposition(p).phis, f)) {
                const auto r = verify::check_real(phi, SamplePlan{SampleDomain::conjugation_pairs, i, 100});
                realness.see(r.verdict ? 0.0 : r.max_residual);
                if (!r.verdict) realness.fail("check_real on pencil " + std::to_string(i));
            }
            synthesis::Options opts;
            opts.seed = i;
            opts.hermitian = true;
            opts.real = true;
            const auto syn = synthesis::pencil_to_herglotz(p, opts, {});
            const ComplexMatrix& u = syn.gr.u();
            imag.see(u.imag().cwiseAbs().maxCoeff());
            symmetry.see(numerics::norm(ComplexMatrix(u - u.transpose())));
            synthesized.push_back(syn.gr);
            synthesized_hermitian.push_back(true);
        });
    }
    line(3, "real case, 25 real homogeneous pencils",
         realness.errors == 0 && imag.worst <= 1e-9 && symmetry.worst <= 1e-9,
         "realified factors pass check_real" + std::string(realness.errors ? " (NO)" : "") +
             fmt(", max |Im U| %.3g (<= 1e-9), ||U - U^T|| %.3g (<= 1e-9)", imag.worst, symmetry.worst) +
             errors_suffix(realness));
}

void knese() {
    const double r2 = std::sqrt(2.0);
    const auto p = mono({0, 0}, 2.0) + mono({1, 0}, -1.0) + mono({0, 1}, -1.0);
    const auto q = mono({1, 1}, 2.0) + mono({1, 0}, -1.0) + mono({0, 1}, -1.0);
    const std::vector<poly::MatrixPolynomial> psis = {mono({0, 0}, r2) + mono({0, 1}, -r2),
                                                      mono({0, 0}, r2) + mono({1, 0}, -r2)};
    const auto v = aglerkit::verify_knese(p, q, psis);

    // compression bound on random factor families
    Rng rng(424242);
    int bound_violations = 0;
    Tally comp;
    for (int trial = 0; trial < 100; ++trial) {
        const int d = 1 + trial % 3;
        const int n = 1 + trial % 2;
        const int degree = trial % 3;
        const auto bound = aglerkit::compression_bound(d, degree, n);
        std::vector<poly::MatrixPolynomial> xis;
        for (int k = 0; k < d; ++k) {
            poly::MatrixPolynomial xi(d, static_cast<int>(bound) + 1 + static_cast<int>(rng.next() % 4), n);
            for (const auto& alpha : poly::multi_indices_up_to(d, degree)) xi.add_term(alpha, rng.complex_matrix(xi.rows(), n));
            xis.push_back(std::move(xi));
        }
        guarded(comp, "family " + std::to_string(trial), [&] {
            for (const auto& psi : aglerkit::compress_sos(xis, degree)) {
                if (psi.rows() > bound) ++bound_violations;
            }
        });
    }

    // GR realization of q/p from the Knese thetas psi_k / p
    double inner_residual = std::numeric_limits<double>::infinity();
    Tally gr;
    guarded(gr, "knese realization", [&] {
        const FunctionHandle f{2, 1, 1, Domain::polydisk, [p, q](const Point& z) {
                                   return ComplexMatrix(poly::poly_eval(q, z) * poly::poly_eval(p, z).inverse());
                               }};
        std::vector<FunctionHandle> thetas;
        for (const auto& psi : psis) {
            thetas.push_back(FunctionHandle{2, 1, 1, Domain::polydisk, [p, psi](const Point& z) {
                                                return ComplexMatrix(poly::poly_eval(psi, z) * poly::poly_eval(p, z).inverse());
                                            }});
        }
        const auto re = realization::lurking_isometry(f, thetas);
        inner_residual = 0.0;
        for (const auto& r : aglerkit::inner_check(realization::transfer_handle(re), SamplePlan{SampleDomain::torus, 1, 200})) {
            inner_residual = std::max(inner_residual, r.max_residual);
        }
    });
    line(4, "Knese machinery",
         v.residual <= 1e-12 && comp.errors == 0 && bound_violations == 0 && gr.errors == 0 && inner_residual <= 1e-8,
         fmt("witness residual %.3g (<= 1e-12), ", v.residual) + std::to_string(bound_violations) +
             " compression bound violations in 100 families" + errors_suffix(comp) +
             fmt(", inner_check residual %.3g (<= 1e-8)", inner_residual) + errors_suffix(gr));
}

void class_membership() {
    Tally inner, positivity, tuple, homogeneous;
    for (std::uint64_t i = 0; i < 50; ++i) {
        guarded(inner, "nonhomogeneous pencil " + std::to_string(i), [&] {
            const auto p = sweep_pencil(PencilClass::nonhomogeneous, i);
            const auto f = bessmertnyi::pencil_handle(p);
            inner.see(verify::check_cayley_inner(f, SamplePlan{SampleDomain::polyhalfplane, i, 100}).max_residual);
            positivity.see(verify::check_herglotz_positivity(f, SamplePlan{SampleDomain::polyhalfplane, i, 500}).max_residual);
            synthesis::Options opts;
            opts.seed = i;
            tuple.see(verify::check_tuple_positivity(synthesis::pencil_to_gr(p, opts, {}), 100, i, 4).max_residual);
        });
    }
    for (std::uint64_t i = 0; i < 50; ++i) {
        guarded(homogeneous, "homogeneous pencil " + std::to_string(i), [&] {
            const auto tag = i % 2 == 0 ? PencilClass::homogeneous : PencilClass::real_homogeneous;
            const auto f = bessmertnyi::pencil_handle(sweep_pencil(tag, i));
            homogeneous.see(verify::check_homogeneous(f, SamplePlan{SampleDomain::scaling_rays, i, 100}).max_residual);
            inner.see(verify::check_cayley_inner(f, SamplePlan{SampleDomain::polyhalfplane, i, 100}).max_residual);
        });
    }
    const int errors = inner.errors + homogeneous.errors;
    line(5, "class membership sweep",
         errors == 0 && inner.worst <= 1e-9 && positivity.worst <= 1e-9 && tuple.worst <= 1e-8 && homogeneous.worst <= 1e-9,
         fmt("cayley_inner %.3g (<= 1e-9), min Re eig %.3g (>= -1e-9), ", inner.worst, -positivity.worst) +
             fmt("min tuple eig %.3g (>= -1e-8), homogeneous %.3g (<= 1e-9)", -tuple.worst, homogeneous.worst) +
             errors_suffix(inner) + errors_suffix(homogeneous));
}

void defect_identities() {
    Tally agler, difference;
    int hermitian_count = 0;
    for (std::size_t i = 0; i < synthesized.size(); ++i) {
        guarded(agler, "realization " + std::to_string(i), [&] {
            agler.see(realization::agler_decomposition_check(synthesized[i], 100, i).max_residual);
            if (synthesized_hermitian[i]) {
                ++hermitian_count;
                difference.see(realization::difference_identity_check(synthesized[i], 100, i).max_residual);
            }
        });
    }
    line(6, "defect identities on " + std::to_string(synthesized.size()) + " synthesized realizations",
         agler.errors == 0 && !synthesized.empty() && agler.worst <= 1e-9 && difference.worst <= 1e-9,
         fmt("Agler decomposition %.3g (<= 1e-9), difference identity %.3g (<= 1e-9) on ", agler.worst, difference.worst) +
             std::to_string(hermitian_count) + " Hermitian" + errors_suffix(agler));
}

void determinism() {
    const fs::path dir = fs::temp_directory_path() / ("agler_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto at = [&](const std::string& name) { return (dir / name).string(); };
    bool generate_ok = true, synthesize_ok = true, roundtrip_ok = true;

    const std::vector<std::string> kinds = {"pencil_nonhomogeneous", "pencil_homogeneous", "pencil_real",
                                            "herglotz_realization", "gr_unitary", "commuting_contractions"};
    for (const auto& kind : kinds) {
        for (const auto& tag : {"a", "b"}) {
            if (run_cli({"generate", "--kind", kind, "--seed", "77", "--d", "2", "--n", "2", "--m", "2", "--output",
                         at(kind + tag)}) != 0)
                generate_ok = false;
        }
        generate_ok = generate_ok && slurp(at(kind + "a")) == slurp(at(kind + "b"));
    }
    for (const auto& target : {"decomposition", "gr", "herglotz", "pencil_roundtrip"}) {
        for (const auto& tag : {"a", "b"}) {
            if (run_cli({"synthesize", "--input", at("pencil_homogeneousa"), "--target", target, "--hermitian", "--seed",
                         "5", "--output", at(std::string(target) + tag)}) != 0)
                synthesize_ok = false;
        }
        synthesize_ok = synthesize_ok && slurp(at(std::string(target) + "a")) == slurp(at(std::string(target) + "b")) &&
                        slurp(at(std::string(target) + "a.report.json")) == slurp(at(std::string(target) + "b.report.json"));
    }

    // load o save over every artifact kind present on disk, plus the two without a generator
    std::vector<std::string> files;
    for (const auto& kind : kinds) files.push_back(at(kind + "a"));
    for (const auto& target : {"decomposition", "gr", "herglotz", "pencil_roundtrip"}) {
        files.push_back(at(std::string(target) + "a"));
        files.push_back(at(std::string(target) + "a.report.json"));
    }
    const double r2 = std::sqrt(2.0);
    const auto p = mono({0, 0}, 2.0) + mono({1, 0}, -1.0) + mono({0, 1}, -1.0);
    const auto q = mono({1, 1}, 2.0) + mono({1, 0}, -1.0) + mono({0, 1}, -1.0);
    const std::vector<poly::MatrixPolynomial> psis = {mono({0, 0}, r2) + mono({0, 1}, -r2),
                                                      mono({0, 0}, r2) + mono({1, 0}, -r2)};
    artifact::save_file(artifact::make(aglerkit::KneseWitness{p, q, psis, 0.0}), at("knese"));
    artifact::save_file(artifact::make(psis), at("psis"));
    files.push_back(at("knese"));
    files.push_back(at("psis"));
    std::set<artifact::Kind> seen;
    for (const auto& f : files) {
        try {
            const auto a = artifact::load_file(f);
            seen.insert(a.kind);
            artifact::save_file(a, f + ".again");
            roundtrip_ok = roundtrip_ok && artifact::load_file(f + ".again") == a && slurp(f + ".again") == slurp(f);
        } catch (const std::exception&) {
            roundtrip_ok = false;
        }
    }
    roundtrip_ok = roundtrip_ok && seen.size() == 8;
    fs::remove_all(dir);
    line(7, "determinism", generate_ok && synthesize_ok && roundtrip_ok,
         std::string("generate ") + (generate_ok ? "byte-identical" : "DIFFERS") + ", synthesize " +
             (synthesize_ok ? "byte-identical" : "DIFFERS") + ", load o save identity on " + std::to_string(seen.size()) +
             " of 8 kinds" + (roundtrip_ok ? "" : " (FAILED)"));
}

}  // namespace

int main() {
    grand_round_trip();
    homogeneous_structure();
    real_case();
    knese();
    class_membership();
    defect_identities();
    determinism();
    std::printf("%s: %d of 7 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
