#include "agler/synthesis.hpp"

#include "agler/cayley.hpp"
#include "agler/numerics.hpp"

namespace agler::synthesis {

using bessmertnyi::LongResolventPencil;
using numerics::norm;

namespace {

constexpr std::uint64_t kFreshSalt = 0xF5E5;
constexpr double kMatchThreshold = 1e-8;

realization::LurkingOptions lurking_options(const Options& opts) {
    realization::LurkingOptions lo;
    lo.hermitian = opts.hermitian;
    lo.real = opts.real;
    lo.plan = SamplePlan{SampleDomain::polydisk, opts.seed, opts.samples, 0.9, 0.0};
    return lo;
}

SamplePlan fresh_plan(const Options& opts) {
    return SamplePlan{SampleDomain::polydisk, opts.seed ^ kFreshSalt, opts.check_points, 0.9, 0.0};
}

std::vector<FunctionHandle> maybe_realify(const std::vector<FunctionHandle>& phis, const FunctionHandle& f,
                                          const Options& opts, const Tolerances& tol) {
    if (!opts.real) return phis;
    return run_stage("realification", [&] { return bessmertnyi::realify_decomposition(phis, f, tol, opts.seed); });
}

void append(std::vector<SampleReport>* out, std::vector<SampleReport> more) {
    if (out == nullptr) return;
    out->insert(out->end(), more.begin(), more.end());
}

}  // namespace

realization::GivoneRoesserRealization pencil_to_gr(const LongResolventPencil& pencil, const Options& opts,
                                                   const Tolerances& tol, std::vector<SampleReport>* reports) {
    const FunctionHandle f = bessmertnyi::pencil_handle(pencil);
    const auto dec = run_stage("decomposition", [&] { return bessmertnyi::pencil_decomposition(pencil, opts.literal_sqrt, tol); });
    const auto phis = maybe_realify(dec.phis, f, opts, tol);
    const auto thetas = bessmertnyi::phi_to_theta(phis, f);
    const FunctionHandle schur = cayley::double_cayley(f);
    auto re = run_stage("lurking_isometry", [&] { return realization::lurking_isometry(schur, thetas, lurking_options(opts), tol); });
    append(reports, realization::verify_realization(re, schur, fresh_plan(opts), tol, kMatchThreshold));
    if (reports != nullptr) {
        reports->push_back(realization::agler_decomposition_check(re, opts.check_points, opts.seed ^ kFreshSalt));
        if (opts.hermitian) {
            reports->push_back(realization::difference_identity_check(re, opts.check_points, opts.seed ^ kFreshSalt));
        }
    }
    return re;
}

HerglotzSynthesis pencil_to_herglotz(const LongResolventPencil& pencil, const Options& opts, const Tolerances& tol) {
    HerglotzSynthesis out;
    const int d = pencil.d();
    const FunctionHandle f = bessmertnyi::pencil_handle(pencil);
    const FunctionHandle big_f = cayley::compose_disk_to_halfplane(f);

    const auto dec = run_stage("decomposition", [&] { return bessmertnyi::pencil_decomposition(pencil, opts.literal_sqrt, tol); });
    out.split = run_stage("split_at_zero", [&] { return herglotz::split_at_zero(big_f(Point::Zero(d)), tol); });
    const ComplexMatrix beta = out.split.beta;
    const ComplexMatrix delta = out.split.delta;
    const int r = static_cast<int>(delta.rows());
    run_stage("reduce_to_plus", [&] { return herglotz::reduce_to_plus(big_f, beta, delta, tol, 20, opts.seed); });

    // f_+ = L^*(f - beta)L on the poly-halfplane, with phi_k^+ = phi_k L.
    const ComplexMatrix l =
        run_stage("reduce_to_plus", [&] {
            return numerics::checked_solve(ComplexMatrix(delta * delta.adjoint()), delta, ErrorCode::SingularShift,
                                           "delta delta^*");
        }).adjoint();
    const FunctionHandle f_plus{d, r, r, Domain::polyhalfplane,
                                [f, beta, l](const Point& z) { return ComplexMatrix(l.adjoint() * (f(z) - beta) * l); }};
    std::vector<FunctionHandle> phis_plus;
    for (const auto& phi : dec.phis) {
        phis_plus.push_back(FunctionHandle{d, phi.rows, r, Domain::polyhalfplane,
                                           [phi, l](const Point& z) { return ComplexMatrix(phi(z) * l); }});
    }
    phis_plus = maybe_realify(phis_plus, f_plus, opts, tol);
    const auto thetas = bessmertnyi::phi_to_theta(phis_plus, f_plus);
    const FunctionHandle schur_plus = cayley::double_cayley(f_plus);

    out.gr = run_stage("lurking_isometry",
                       [&] { return realization::lurking_isometry(schur_plus, thetas, lurking_options(opts), tol); });
    out.herglotz = run_stage("schur_to_herglotz", [&] { return herglotz::schur_to_herglotz(out.gr, beta, delta, tol); });

    append(&out.reports, realization::verify_realization(out.gr, schur_plus, fresh_plan(opts), tol, kMatchThreshold));
    out.reports.push_back(realization::agler_decomposition_check(out.gr, opts.check_points, opts.seed ^ kFreshSalt));
    if (opts.hermitian) {
        out.reports.push_back(realization::difference_identity_check(out.gr, opts.check_points, opts.seed ^ kFreshSalt));
    }
    ReportBuilder match("herglotz_match", kMatchThreshold);
    for (const Point& zeta : expand(fresh_plan(opts), d)) {
        try {
            const ComplexMatrix expected = big_f(zeta);
            const double diff = norm(ComplexMatrix(herglotz::eval_herglotz(out.herglotz, zeta) - expected));
            match.record(diff / std::max(1.0, norm(expected)), zeta);
        } catch (const Error& e) {
            if (!e.is_singular()) throw;
            match.skip();
        }
    }
    out.reports.push_back(match.finish(false));
    if (pencil.tag() != bessmertnyi::PencilClass::nonhomogeneous) {
        append(&out.reports, bessmertnyi::homogeneous_structure_check(out.herglotz, tol).reports(kMatchThreshold));
    }
    return out;
}

RoundTrip pencil_roundtrip(const LongResolventPencil& pencil, const Options& opts, const Tolerances& tol) {
    HerglotzSynthesis stages = pencil_to_herglotz(pencil, opts, tol);
    LongResolventPencil rebuilt =
        run_stage("herglotz_to_pencil", [&] { return bessmertnyi::herglotz_to_pencil(stages.herglotz, tol); });
    ReportBuilder cmp("pencil_match", kRoundTripThreshold);
    for (const Point& z : polyhalfplane_points(pencil.d(), opts.check_points, opts.seed ^ kFreshSalt ^ 0xABCDEF)) {
        try {
            cmp.record(norm(ComplexMatrix(bessmertnyi::eval_pencil(rebuilt, z) - bessmertnyi::eval_pencil(pencil, z))), z);
        } catch (const Error& e) {
            if (!e.is_singular()) throw;
            cmp.skip();
        }
    }
    return RoundTrip{std::move(stages), std::move(rebuilt), cmp.finish()};
}

}  // namespace agler::synthesis
