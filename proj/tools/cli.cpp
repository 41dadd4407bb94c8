#include "cli.hpp"

#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "agler/aglerkit.hpp"
#include "agler/artifact.hpp"
#include "agler/bessmertnyi.hpp"
#include "agler/herglotz.hpp"
#include "agler/numerics.hpp"
#include "agler/realization.hpp"
#include "agler/synthesis.hpp"
#include "agler/verify.hpp"

namespace agler::cli {

using nlohmann::json;

namespace {

struct Settings {
    std::string input;
    std::string output;
    std::string report;
    std::string point;
    std::string points;
    std::string tuple;
    bool cayley_tuple = false;
    std::string target = "pencil_roundtrip";
    std::vector<std::string> checks;
    std::uint64_t seed = 0;
    int samples = 100;
    bool hermitian = false;
    bool real = false;
    std::string kind;
    int d = 2;
    int n = 1;
    int m = 1;
    int s = 2;
    Tolerances tol;
};

/// A point is a JSON list whose entries are numbers or [re, im] pairs.
Point point_from_json(const json& j) {
    if (!j.is_array()) throw Error(ErrorCode::Malformed, "a point is a list of coordinates");
    Point p(static_cast<Eigen::Index>(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) {
        const json& c = j[k];
        if (c.is_number()) {
            p[static_cast<Eigen::Index>(k)] = c.get<double>();
        } else {
            p[static_cast<Eigen::Index>(k)] = artifact::complex_from_json(c);
        }
    }
    return p;
}

json parse_json_text(const std::string& text, const std::string& what) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::Malformed, "cannot parse " + what + ": " + e.what());
    }
}

std::vector<Point> read_points(const Settings& s) {
    std::vector<Point> out;
    if (!s.point.empty()) out.push_back(point_from_json(parse_json_text(s.point, "--point")));
    if (!s.points.empty()) {
        std::ifstream in(s.points);
        if (!in) throw Error(ErrorCode::Malformed, "cannot read '" + s.points + "'");
        std::stringstream buffer;
        buffer << in.rdbuf();
        const json list = parse_json_text(buffer.str(), "--points file");
        if (!list.is_array()) throw Error(ErrorCode::Malformed, "--points file must hold a list of points");
        for (const auto& p : list) out.push_back(point_from_json(p));
    }
    return out;
}

json value_to_json(const ComplexMatrix& m) { return artifact::matrix_to_json(m).at("entries"); }

std::string report_path(const Settings& s, const std::string& fallback_base) {
    if (!s.report.empty()) return s.report;
    return fallback_base + ".report.json";
}

void print_summary(const std::vector<SampleReport>& reports, std::ostream& out) {
    for (const auto& r : reports) {
        out << (r.verdict ? "PASS " : "FAIL ") << r.name << "  max_residual=" << r.max_residual
            << "  threshold=" << r.threshold << "  samples=" << r.sample_count << "  skipped=" << r.skipped;
        if (!r.note.empty()) out << "  (" << r.note << ")";
        out << "\n";
    }
}

SampleReport failure_report(const std::string& name, const std::string& note) {
    SampleReport r;
    r.name = name;
    r.verdict = false;
    r.max_residual = std::numeric_limits<double>::infinity();
    r.note = note;
    return r;
}

// ---- eval -----------------------------------------------------------------

int cmd_eval(const Settings& s, std::ostream& out) {
    const auto input = artifact::load_file(s.input, s.tol);
    if (!s.tuple.empty()) {
        const auto t = artifact::load_file(s.tuple, s.tol);
        if (t.kind != artifact::Kind::operator_tuple) throw Error(ErrorCode::Malformed, "--tuple needs an operator_tuple artifact");
        auto tuple = std::get<cayley::TupleOfMatrices>(t.payload);
        if (s.cayley_tuple) {
            tuple = cayley::operator_cayley_tuple(tuple, cayley::TupleDirection::contractive_to_accretive, s.tol);
        }
        ComplexMatrix value;
        if (input.kind == artifact::Kind::gr_realization) {
            value = realization::eval_transfer_tuple(std::get<realization::GivoneRoesserRealization>(input.payload), tuple);
        } else if (input.kind == artifact::Kind::pencil) {
            // f(R) through the realization of the double Cayley transform.
            const auto& pencil = std::get<bessmertnyi::LongResolventPencil>(input.payload);
            synthesis::Options opts;
            opts.seed = s.seed;
            const auto gr = synthesis::pencil_to_gr(pencil, opts, s.tol);
            const auto back = cayley::operator_cayley_tuple(tuple, cayley::TupleDirection::accretive_to_contractive, s.tol);
            value = cayley::value_cayley(realization::eval_transfer_tuple(gr, back),
                                         cayley::ValueDirection::schur_to_herglotz);
        } else {
            throw Error(ErrorCode::Malformed, "tuple evaluation needs a gr_realization or pencil input");
        }
        out << value_to_json(value).dump() << "\n";
        return kOk;
    }
    const auto points = read_points(s);
    if (points.empty()) throw Error(ErrorCode::Malformed, "give --point or --points");
    FunctionHandle f;
    switch (input.kind) {
        case artifact::Kind::pencil:
            f = bessmertnyi::pencil_handle(std::get<bessmertnyi::LongResolventPencil>(input.payload));
            break;
        case artifact::Kind::gr_realization:
            f = realization::transfer_handle(std::get<realization::GivoneRoesserRealization>(input.payload));
            break;
        case artifact::Kind::herglotz_realization:
            f = herglotz::herglotz_handle(std::get<herglotz::HerglotzRealization>(input.payload));
            break;
        default: throw Error(ErrorCode::Malformed, "artifact kind '" + artifact::to_string(input.kind) + "' cannot be evaluated");
    }
    for (const Point& z : points) out << value_to_json(f(z)).dump() << "\n";
    return kOk;
}

// ---- synthesize -----------------------------------------------------------

int cmd_synthesize(const Settings& s, std::ostream& out, std::ostream& err) {
    const auto input = artifact::load_file(s.input, s.tol);
    if (input.kind != artifact::Kind::pencil) throw Error(ErrorCode::Malformed, "synthesize needs a pencil artifact");
    if (s.output.empty()) throw Error(ErrorCode::Malformed, "synthesize needs --output");
    const auto& pencil = std::get<bessmertnyi::LongResolventPencil>(input.payload);
    synthesis::Options opts;
    opts.hermitian = s.hermitian;
    opts.real = s.real;
    opts.seed = s.seed;
    opts.check_points = s.samples;

    std::vector<SampleReport> reports;
    const std::string rpath = report_path(s, s.output);
    int code = kOk;
    try {
        artifact::Artifact result;
        if (s.target == "decomposition") {
            const auto dec = synthesis::run_stage("decomposition", [&] { return bessmertnyi::pencil_decomposition(pencil, false, s.tol); });
            const auto f = bessmertnyi::pencil_handle(pencil);
            reports.push_back(verify::check_halfplane_decomposition(f, dec.phis, s.samples, s.seed, 1.0));
            if (pencil.tag() != bessmertnyi::PencilClass::nonhomogeneous) {
                reports.push_back(verify::check_halfplane_decomposition(f, dec.phis, s.samples, s.seed, -1.0));
            }
            result = artifact::make(artifact::DecompositionData{pencil, dec.factors});
        } else if (s.target == "gr") {
            result = artifact::make(synthesis::pencil_to_gr(pencil, opts, s.tol, &reports));
        } else if (s.target == "herglotz") {
            auto hs = synthesis::pencil_to_herglotz(pencil, opts, s.tol);
            reports = hs.reports;
            result = artifact::make(hs.herglotz);
        } else if (s.target == "pencil_roundtrip") {
            auto rt = synthesis::pencil_roundtrip(pencil, opts, s.tol);
            reports = rt.stages.reports;
            reports.push_back(rt.comparison);
            result = artifact::make(rt.pencil);
        } else {
            throw Error(ErrorCode::Malformed, "unknown --target '" + s.target + "'");
        }
        artifact::save_file(result, s.output);
        for (const auto& r : reports) {
            if (!r.verdict) {
                err << "stage verification failed: " << r.name << "\n";
                code = kStageFailed;
            }
        }
    } catch (const Error& e) {
        if (e.code() == ErrorCode::Malformed) throw;
        reports.push_back(failure_report("synthesis", e.what()));
        err << "synthesis failed: " << e.what() << "\n";
        code = kStageFailed;
    }
    artifact::save_file(artifact::make(reports), rpath);
    print_summary(reports, out);
    return code;
}

// ---- verify ---------------------------------------------------------------

using CheckFn = std::function<std::vector<SampleReport>()>;

std::map<std::string, CheckFn> checks_for(const artifact::Artifact& a, const Settings& s) {
    std::map<std::string, CheckFn> c;
    const SamplePlan plan{SampleDomain::polyhalfplane, s.seed, s.samples, 0.9, 0.0};
    const SamplePlan disk{SampleDomain::polydisk, s.seed, s.samples, 0.9, 0.0};
    const SamplePlan torus{SampleDomain::torus, s.seed, s.samples, 0.9, 0.0};
    const Tolerances tol = s.tol;
    switch (a.kind) {
        case artifact::Kind::pencil: {
            const auto pencil = std::get<bessmertnyi::LongResolventPencil>(a.payload);
            const auto f = bessmertnyi::pencil_handle(pencil);
            c["cayley_inner"] = [=] { return std::vector{verify::check_cayley_inner(f, plan)}; };
            c["homogeneous"] = [=] { return std::vector{verify::check_homogeneous(f, SamplePlan{SampleDomain::scaling_rays, s.seed, s.samples})}; };
            c["real"] = [=] { return std::vector{verify::check_real(f, SamplePlan{SampleDomain::conjugation_pairs, s.seed, s.samples})}; };
            c["herglotz_positivity"] = [=] { return std::vector{verify::check_herglotz_positivity(f, plan)}; };
            c["decomposition"] = [=] {
                const auto dec = bessmertnyi::pencil_decomposition(pencil, false, tol);
                return std::vector{verify::check_halfplane_decomposition(f, dec.phis, s.samples, s.seed)};
            };
            c["kernel_positivity"] = [=] {
                const auto dec = bessmertnyi::pencil_decomposition(pencil, false, tol);
                std::vector<SampleReport> out;
                const auto pts = polyhalfplane_points(pencil.d(), std::min(s.samples, 40), s.seed);
                for (const auto& phi : dec.phis) {
                    out.push_back(verify::check_positive_kernel(
                        [phi](const Point& w, const Point& z) { return ComplexMatrix(phi(w).adjoint() * phi(z)); }, pts, tol));
                }
                return out;
            };
            c["tuple_positivity"] = [=] {
                synthesis::Options opts;
                opts.seed = s.seed;
                const auto gr = synthesis::pencil_to_gr(pencil, opts, tol);
                return std::vector{verify::check_tuple_positivity(gr, s.samples, s.seed)};
            };
            break;
        }
        case artifact::Kind::gr_realization: {
            const auto re = std::get<realization::GivoneRoesserRealization>(a.payload);
            c["unitarity"] = [=] {
                auto all = realization::verify_realization(re, realization::transfer_handle(re), disk, tol);
                return std::vector<SampleReport>(all.begin() + 1, all.end());
            };
            c["agler_decomposition"] = [=] { return std::vector{realization::agler_decomposition_check(re, s.samples, s.seed)}; };
            c["difference_identity"] = [=] { return std::vector{realization::difference_identity_check(re, s.samples, s.seed)}; };
            c["contractive"] = [=] {
                ReportBuilder b("contractive", 1e-9);
                for (const Point& z : expand(disk, re.d())) {
                    try {
                        b.record(std::max(0.0, numerics::norm(realization::eval_transfer(re, z)) - 1.0), z);
                    } catch (const Error& e) {
                        if (!e.is_singular()) throw;
                        b.skip();
                    }
                }
                return std::vector{b.finish()};
            };
            c["inner"] = [=] { return aglerkit::inner_check(realization::transfer_handle(re), torus); };
            break;
        }
        case artifact::Kind::herglotz_realization: {
            const auto h = std::get<herglotz::HerglotzRealization>(a.payload);
            const auto f = herglotz::herglotz_handle(h);
            c["herglotz_positivity"] = [=] { return std::vector{verify::check_herglotz_positivity(f, disk)}; };
            c["homogeneous_structure"] = [=] {
                return bessmertnyi::homogeneous_structure_check(h, tol).reports(tol.identity_atol);
            };
            c["xi_decomposition"] = [=] {
                const auto xis = herglotz::xi_functions(h);
                const auto pts = polydisk_points(h.d(), 2 * s.samples, s.seed);
                ReportBuilder b("xi_decomposition", 1e-9);
                for (int i = 0; i < s.samples; ++i) {
                    const Point& w = pts[static_cast<std::size_t>(2 * i)];
                    const Point& z = pts[static_cast<std::size_t>(2 * i + 1)];
                    ComplexMatrix defect = f(w).adjoint() + f(z);
                    for (int k = 0; k < h.d(); ++k) {
                        defect -= (1.0 - std::conj(w[k]) * z[k]) * (xis[static_cast<std::size_t>(k)](w).adjoint() *
                                                                    xis[static_cast<std::size_t>(k)](z));
                    }
                    b.record(numerics::norm(defect), z);
                }
                return std::vector{b.finish()};
            };
            c["boundary_skew"] = [=] {
                ReportBuilder b("boundary_skew", 1e-8);
                for (const Point& mu : expand(torus, h.d())) {
                    try {
                        const ComplexMatrix v = herglotz::eval_herglotz(h, mu);
                        b.record(numerics::norm(ComplexMatrix(v + v.adjoint())), mu);
                    } catch (const Error& e) {
                        if (!e.is_singular()) throw;
                        b.skip();
                    }
                }
                return std::vector{b.finish(false)};
            };
            break;
        }
        case artifact::Kind::knese_witness: {
            const auto w = std::get<aglerkit::KneseWitness>(a.payload);
            c["knese"] = [=] {
                const auto v = aglerkit::verify_knese(w.p, w.q, w.psis, tol);
                ReportBuilder b("knese", tol.identity_atol);
                b.record(v.residual, std::vector<Complex>{});
                return std::vector{b.finish()};
            };
            c["inner"] = [=] {
                const auto gr = realization::lurking_isometry(poly::right_quotient(w.q, w.p, Domain::polydisk),
                                                              [&] {
                                                                  std::vector<FunctionHandle> hs;
                                                                  for (const auto& psi : w.psis) {
                                                                      auto hpsi = poly::right_quotient(psi, w.p, Domain::polydisk);
                                                                      hs.push_back(hpsi);
                                                                  }
                                                                  return hs;
                                                              }(),
                                                              {}, tol);
                return aglerkit::inner_check(realization::transfer_handle(gr), torus);
            };
            break;
        }
        case artifact::Kind::operator_tuple: {
            const auto t = std::get<cayley::TupleOfMatrices>(a.payload);
            c["commuting"] = [=] {
                ReportBuilder b("commuting", 1e-10);
                b.record(t.max_commutator(), std::vector<Complex>{});
                return std::vector{b.finish()};
            };
            c["contractive"] = [=] {
                ReportBuilder b("contractive", 0.0);
                for (int k = 0; k < t.d(); ++k) {
                    b.record(std::max(0.0, numerics::norm(t[k]) - (1.0 - 1e-10)), std::vector<Complex>{});
                }
                return std::vector{b.finish(false)};
            };
            c["accretive_image"] = [=] {
                const auto r = cayley::operator_cayley_tuple(t, cayley::TupleDirection::contractive_to_accretive, tol);
                ReportBuilder b("accretive_image", 0.0);
                for (int k = 0; k < r.d(); ++k) {
                    const ComplexMatrix herm = r[k] + r[k].adjoint();
                    b.record(-numerics::hermitian_eig(herm, tol).eigenvalues(0), std::vector<Complex>{});
                }
                return std::vector{b.finish(false)};
            };
            break;
        }
        default: break;
    }
    return c;
}

int cmd_verify(const Settings& s, std::ostream& out, std::ostream& err) {
    const auto input = artifact::load_file(s.input, s.tol);
    auto available = checks_for(input, s);
    std::vector<std::string> names = s.checks;
    if (names.empty()) {
        for (const auto& [name, fn] : available) names.push_back(name);
    }
    if (names.empty()) throw Error(ErrorCode::Malformed, "no checks apply to '" + artifact::to_string(input.kind) + "'");
    for (const auto& name : names) {
        if (available.count(name) == 0) {
            throw Error(ErrorCode::Malformed, "check '" + name + "' does not apply to '" + artifact::to_string(input.kind) + "'");
        }
    }
    std::vector<SampleReport> reports;
    for (const auto& name : names) {
        try {
            auto more = available.at(name)();
            reports.insert(reports.end(), more.begin(), more.end());
        } catch (const Error& e) {
            if (e.code() == ErrorCode::Malformed) throw;
            reports.push_back(failure_report(name, e.what()));
        }
    }
    artifact::save_file(artifact::make(reports), report_path(s, s.input));
    print_summary(reports, out);
    for (const auto& r : reports) {
        if (!r.verdict) {
            err << "check failed: " << r.name << "\n";
            return kCheckFailed;
        }
    }
    return kOk;
}

// ---- generate -------------------------------------------------------------

int cmd_generate(const Settings& s, std::ostream& out) {
    if (s.output.empty()) throw Error(ErrorCode::Malformed, "generate needs --output");
    verify::InstanceDims dims{s.d, s.n, s.m, s.s};
    if (dims.d < 1 || dims.n < 1 || dims.m < 0 || dims.s < 1) throw Error(ErrorCode::Malformed, "invalid dimensions");
    const auto artifact = verify::gen_instance(verify::instance_kind_from_string(s.kind), s.seed, dims);
    artifact::save_file(artifact, s.output);
    out << "wrote " << artifact::to_string(artifact.kind) << " to " << s.output << "\n";
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cayley inner Herglotz-Agler realizations: pencils, Givone-Roesser and Herglotz forms"};
    app.require_subcommand(1);
    Settings s;
    auto add_tolerances = [&](CLI::App* sub) {
        sub->add_option("--atol", s.tol.identity_atol, "identity tolerance");
        sub->add_option("--rank-rtol", s.tol.rank_rtol, "relative rank cutoff");
        sub->add_option("--psd-atol", s.tol.psd_atol, "PSD slack");
        sub->add_option("--seed", s.seed, "seed for every sample plan");
    };

    auto* eval = app.add_subcommand("eval", "evaluate a pencil or realization");
    eval->add_option("--input", s.input, "artifact file")->required();
    eval->add_option("--point", s.point, "JSON point, e.g. [1, [0.5, 0.2]]");
    eval->add_option("--points", s.points, "file with a JSON list of points");
    eval->add_option("--tuple", s.tuple, "operator_tuple artifact to substitute");
    eval->add_flag("--cayley-tuple", s.cayley_tuple, "apply R = (I - T)^{-1}(I + T) to the tuple first");
    add_tolerances(eval);

    auto* synth = app.add_subcommand("synthesize", "run the realization pipeline on a pencil");
    synth->add_option("--input", s.input, "pencil artifact")->required();
    synth->add_option("--output", s.output, "output artifact")->required();
    synth->add_option("--report", s.report, "report file (default <output>.report.json)");
    synth->add_option("--target", s.target, "decomposition | gr | herglotz | pencil_roundtrip");
    synth->add_option("--samples", s.samples, "fresh points per comparison");
    synth->add_flag("--hermitian", s.hermitian, "require a Hermitian colligation");
    synth->add_flag("--real", s.real, "require a real colligation");
    add_tolerances(synth);

    auto* ver = app.add_subcommand("verify", "run sampled checks on an artifact");
    ver->add_option("--input", s.input, "artifact file")->required();
    ver->add_option("--checks", s.checks, "comma-separated check names")->delimiter(',');
    ver->add_option("--samples", s.samples, "samples per check");
    ver->add_option("--report", s.report, "report file (default <input>.report.json)");
    add_tolerances(ver);

    auto* gen = app.add_subcommand("generate", "write a seeded instance");
    gen->add_option("--kind", s.kind, "instance kind")->required();
    gen->add_option("--output", s.output, "output artifact")->required();
    gen->add_option("--d", s.d, "variables");
    gen->add_option("--n", s.n, "output size");
    gen->add_option("--m", s.m, "inner/state size");
    gen->add_option("--s", s.s, "tuple matrix size");
    add_tolerances(gen);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return kMalformed;
    }

    try {
        s.tol.validate();
        if (s.samples < 1) throw Error(ErrorCode::Malformed, "--samples must be positive");
        if (*eval) return cmd_eval(s, out);
        if (*synth) return cmd_synthesize(s, out, err);
        if (*ver) return cmd_verify(s, out, err);
        if (*gen) return cmd_generate(s, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        if (e.is_singular()) return kSingular;
        return kMalformed;
    }
    return kMalformed;
}

}  // namespace agler::cli
