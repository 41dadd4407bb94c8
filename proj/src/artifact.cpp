#include "agler/artifact.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "agler/numerics.hpp"

namespace agler::artifact {

using nlohmann::json;

namespace {

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::Malformed, what); }

const json& field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field '") + key + "'");
    return j.at(key);
}

double number(const json& j) {
    if (!j.is_number()) malformed("expected a number");
    return j.get<double>();
}

int count(const json& j) {
    if (!j.is_number_integer()) malformed("expected an integer");
    const auto v = j.get<long long>();
    if (v < 0 || v > 1'000'000) malformed("count out of range");
    return static_cast<int>(v);
}

/// Doubles that may be infinite (report thresholds) travel as strings.
json real_to_json(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

double real_from_json(const json& j) {
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
        malformed("bad number string '" + s + "'");
    }
    return number(j);
}

json ints_to_json(const std::vector<int>& v) { return json(v); }

std::vector<int> ints_from_json(const json& j) {
    if (!j.is_array()) malformed("expected an integer list");
    std::vector<int> out;
    for (const auto& x : j) out.push_back(count(x));
    return out;
}

json polynomial_to_json(const poly::MatrixPolynomial& p) {
    json terms = json::array();
    for (const auto& [alpha, coeff] : p.terms()) {
        terms.push_back({{"exponents", alpha.exponents()}, {"matrix", matrix_to_json(coeff)}});
    }
    return {{"d", p.d()}, {"rows", p.rows()}, {"cols", p.cols()}, {"terms", terms}};
}

poly::MatrixPolynomial polynomial_from_json(const json& j) {
    poly::MatrixPolynomial p(count(field(j, "d")), count(field(j, "rows")), count(field(j, "cols")));
    const json& terms = field(j, "terms");
    if (!terms.is_array()) malformed("terms must be a list");
    for (const auto& t : terms) {
        poly::MultiIndex alpha(ints_from_json(field(t, "exponents")));
        ComplexMatrix c = matrix_from_json(field(t, "matrix"));
        if (p.terms().count(alpha) != 0) malformed("duplicate monomial");
        if (c.isZero(0.0)) malformed("stored zero term");
        p.add_term(alpha, c);
    }
    return p;
}

json report_to_json(const SampleReport& r) {
    json witness = json::array();
    for (Complex c : r.witness) witness.push_back(complex_to_json(c));
    return {{"name", r.name},
            {"sample_count", r.sample_count},
            {"skipped", r.skipped},
            {"max_residual", real_to_json(r.max_residual)},
            {"threshold", real_to_json(r.threshold)},
            {"verdict", r.verdict},
            {"witness", witness},
            {"note", r.note}};
}

SampleReport report_from_json(const json& j) {
    SampleReport r;
    const json& name = field(j, "name");
    if (!name.is_string()) malformed("report name must be a string");
    r.name = name.get<std::string>();
    r.sample_count = count(field(j, "sample_count"));
    r.skipped = count(field(j, "skipped"));
    r.max_residual = real_from_json(field(j, "max_residual"));
    r.threshold = real_from_json(field(j, "threshold"));
    const json& verdict = field(j, "verdict");
    if (!verdict.is_boolean()) malformed("verdict must be boolean");
    r.verdict = verdict.get<bool>();
    const json& witness = field(j, "witness");
    if (!witness.is_array()) malformed("witness must be a list");
    for (const auto& c : witness) r.witness.push_back(complex_from_json(c));
    if (j.contains("note")) r.note = j.at("note").get<std::string>();
    return r;
}

json pencil_to_json(const bessmertnyi::LongResolventPencil& p) {
    json coeffs = json::array();
    for (const auto& a : p.coefficients()) coeffs.push_back(matrix_to_json(a));
    return {{"d", p.d()}, {"n", p.n()}, {"m", p.m()}, {"tag", bessmertnyi::to_string(p.tag())}, {"coefficients", coeffs}};
}

bessmertnyi::LongResolventPencil pencil_from_json(const json& j, const Tolerances& tol) {
    const int d = count(field(j, "d"));
    const int n = count(field(j, "n"));
    const int m = count(field(j, "m"));
    const json& coeffs = field(j, "coefficients");
    if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != d + 1) malformed("pencil needs d + 1 coefficients");
    std::vector<ComplexMatrix> as;
    for (const auto& c : coeffs) {
        as.push_back(matrix_from_json(c));
        if (as.back().rows() != n + m || as.back().cols() != n + m) malformed("pencil coefficient has the wrong shape");
    }
    return bessmertnyi::LongResolventPencil(n, std::move(as), bessmertnyi::pencil_class_from_string(field(j, "tag").get<std::string>()), tol);
}

template <typename T>
bool same_alternative(const Payload& a, const Payload& b) {
    return std::get<T>(a) == std::get<T>(b);
}

}  // namespace

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) malformed("complex numbers are [re, im] pairs");
    const double re = number(j[0]);
    const double im = number(j[1]);
    if (!std::isfinite(re) || !std::isfinite(im)) malformed("non-finite complex entry");
    return {re, im};
}

json matrix_to_json(const ComplexMatrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_to_json(m(i, k)));
        rows.push_back(row);
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

ComplexMatrix matrix_from_json(const json& j) {
    const int rows = count(field(j, "rows"));
    const int cols = count(field(j, "cols"));
    const json& entries = field(j, "entries");
    if (!entries.is_array() || static_cast<int>(entries.size()) != rows) malformed("matrix row count mismatch");
    ComplexMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        const json& row = entries[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols) malformed("matrix column count mismatch");
        for (int k = 0; k < cols; ++k) m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

std::string to_string(Kind kind) {
    switch (kind) {
        case Kind::pencil: return "pencil";
        case Kind::gr_realization: return "gr_realization";
        case Kind::herglotz_realization: return "herglotz_realization";
        case Kind::matrix_polynomial_set: return "matrix_polynomial_set";
        case Kind::knese_witness: return "knese_witness";
        case Kind::report: return "report";
        case Kind::operator_tuple: return "operator_tuple";
        case Kind::pencil_decomposition: return "pencil_decomposition";
    }
    return "report";
}

Kind kind_from_string(const std::string& name) {
    for (Kind k : {Kind::pencil, Kind::gr_realization, Kind::herglotz_realization, Kind::matrix_polynomial_set,
                   Kind::knese_witness, Kind::report, Kind::operator_tuple, Kind::pencil_decomposition}) {
        if (to_string(k) == name) return k;
    }
    malformed("unknown artifact kind '" + name + "'");
}

bool DecompositionData::operator==(const DecompositionData& other) const {
    if (!(pencil == other.pencil) || factors.size() != other.factors.size()) return false;
    for (std::size_t k = 0; k < factors.size(); ++k) {
        if (!numerics::same_matrix(factors[k], other.factors[k])) return false;
    }
    return true;
}

bool Artifact::operator==(const Artifact& other) const {
    if (kind != other.kind || payload.index() != other.payload.index()) return false;
    return std::visit(
        [&](const auto& value) {
            using T = std::decay_t<decltype(value)>;
            if constexpr (std::is_same_v<T, cayley::TupleOfMatrices>) {
                const auto& o = std::get<T>(other.payload);
                if (value.d() != o.d() || value.commutation_tol() != o.commutation_tol()) return false;
                for (int k = 0; k < value.d(); ++k) {
                    if (!numerics::same_matrix(value[k], o[k])) return false;
                }
                return true;
            } else {
                return same_alternative<T>(payload, other.payload);
            }
        },
        payload);
}

Artifact make(bessmertnyi::LongResolventPencil value) { return {Kind::pencil, std::move(value)}; }
Artifact make(realization::GivoneRoesserRealization value) { return {Kind::gr_realization, std::move(value)}; }
Artifact make(herglotz::HerglotzRealization value) { return {Kind::herglotz_realization, std::move(value)}; }
Artifact make(std::vector<poly::MatrixPolynomial> value) { return {Kind::matrix_polynomial_set, std::move(value)}; }
Artifact make(aglerkit::KneseWitness value) { return {Kind::knese_witness, std::move(value)}; }
Artifact make(std::vector<SampleReport> value) { return {Kind::report, std::move(value)}; }
Artifact make(cayley::TupleOfMatrices value) { return {Kind::operator_tuple, std::move(value)}; }
Artifact make(DecompositionData value) { return {Kind::pencil_decomposition, std::move(value)}; }

json to_json(const Artifact& artifact) {
    json payload;
    std::visit(
        [&](const auto& value) {
            using T = std::decay_t<decltype(value)>;
            if constexpr (std::is_same_v<T, bessmertnyi::LongResolventPencil>) {
                payload = pencil_to_json(value);
            } else if constexpr (std::is_same_v<T, realization::GivoneRoesserRealization>) {
                payload = {{"d", value.d()},
                           {"n", value.n()},
                           {"state_dims", ints_to_json(value.state_dims())},
                           {"U", matrix_to_json(value.u())},
                           {"flags",
                            {{"unitary", value.flags().unitary},
                             {"hermitian", value.flags().hermitian},
                             {"real", value.flags().real}}}};
            } else if constexpr (std::is_same_v<T, herglotz::HerglotzRealization>) {
                payload = {{"d", value.d()},
                           {"n", value.n()},
                           {"state_dims", ints_to_json(value.state_dims())},
                           {"beta", matrix_to_json(value.beta())},
                           {"W", matrix_to_json(value.w())},
                           {"V", matrix_to_json(value.v())}};
            } else if constexpr (std::is_same_v<T, std::vector<poly::MatrixPolynomial>>) {
                json list = json::array();
                for (const auto& p : value) list.push_back(polynomial_to_json(p));
                payload = {{"polynomials", list}};
            } else if constexpr (std::is_same_v<T, aglerkit::KneseWitness>) {
                json psis = json::array();
                for (const auto& p : value.psis) psis.push_back(polynomial_to_json(p));
                payload = {{"p", polynomial_to_json(value.p)},
                           {"q", polynomial_to_json(value.q)},
                           {"psis", psis},
                           {"residual", real_to_json(value.residual)}};
            } else if constexpr (std::is_same_v<T, std::vector<SampleReport>>) {
                json list = json::array();
                for (const auto& r : value) list.push_back(report_to_json(r));
                payload = {{"reports", list}};
            } else if constexpr (std::is_same_v<T, cayley::TupleOfMatrices>) {
                json items = json::array();
                for (const auto& t : value.items()) items.push_back(matrix_to_json(t));
                payload = {{"d", value.d()}, {"s", value.size()}, {"commutation_tol", value.commutation_tol()},
                           {"items", items}};
            } else {
                json factors = json::array();
                for (const auto& y : value.factors) factors.push_back(matrix_to_json(y));
                payload = {{"pencil", pencil_to_json(value.pencil)}, {"factors", factors}};
            }
        },
        artifact.payload);
    return {{"format_version", kFormatVersion}, {"kind", to_string(artifact.kind)}, {"payload", payload}};
}

Artifact from_json(const json& j, const Tolerances& tol) {
    try {
        const json& version = field(j, "format_version");
        if (!version.is_string() || version.get<std::string>() != kFormatVersion) {
            malformed("unsupported format_version");
        }
        const Kind kind = kind_from_string(field(j, "kind").get<std::string>());
        const json& p = field(j, "payload");
        switch (kind) {
            case Kind::pencil: return make(pencil_from_json(p, tol));
            case Kind::gr_realization: {
                const json& flags = field(p, "flags");
                realization::StructureFlags f{field(flags, "unitary").get<bool>(), field(flags, "hermitian").get<bool>(),
                                              field(flags, "real").get<bool>()};
                const auto dims = ints_from_json(field(p, "state_dims"));
                if (static_cast<int>(dims.size()) != count(field(p, "d"))) malformed("state_dims length differs from d");
                return make(realization::GivoneRoesserRealization(count(field(p, "n")), dims,
                                                                  matrix_from_json(field(p, "U")), f, tol));
            }
            case Kind::herglotz_realization: {
                const auto dims = ints_from_json(field(p, "state_dims"));
                if (static_cast<int>(dims.size()) != count(field(p, "d"))) malformed("state_dims length differs from d");
                herglotz::HerglotzRealization h(dims, matrix_from_json(field(p, "beta")), matrix_from_json(field(p, "W")),
                                                matrix_from_json(field(p, "V")), tol);
                if (h.n() != count(field(p, "n"))) malformed("n differs from beta");
                return make(std::move(h));
            }
            case Kind::matrix_polynomial_set: {
                std::vector<poly::MatrixPolynomial> list;
                for (const auto& q : field(p, "polynomials")) list.push_back(polynomial_from_json(q));
                return make(std::move(list));
            }
            case Kind::knese_witness: {
                aglerkit::KneseWitness w;
                w.p = polynomial_from_json(field(p, "p"));
                w.q = polynomial_from_json(field(p, "q"));
                for (const auto& q : field(p, "psis")) w.psis.push_back(polynomial_from_json(q));
                w.residual = real_from_json(field(p, "residual"));
                return make(std::move(w));
            }
            case Kind::report: {
                std::vector<SampleReport> list;
                for (const auto& r : field(p, "reports")) list.push_back(report_from_json(r));
                return make(std::move(list));
            }
            case Kind::operator_tuple: {
                std::vector<ComplexMatrix> items;
                for (const auto& t : field(p, "items")) items.push_back(matrix_from_json(t));
                if (static_cast<int>(items.size()) != count(field(p, "d"))) malformed("tuple length differs from d");
                return make(cayley::TupleOfMatrices(std::move(items), number(field(p, "commutation_tol"))));
            }
            case Kind::pencil_decomposition: {
                DecompositionData data{pencil_from_json(field(p, "pencil"), tol), {}};
                for (const auto& y : field(p, "factors")) data.factors.push_back(matrix_from_json(y));
                if (static_cast<int>(data.factors.size()) != data.pencil.d()) malformed("need one factor per variable");
                return make(std::move(data));
            }
        }
    } catch (const json::exception& e) {
        malformed(e.what());
    }
    malformed("unhandled artifact kind");
}

std::string dump(const Artifact& artifact) { return to_json(artifact).dump(2) + "\n"; }

Artifact parse(const std::string& text, const Tolerances& tol) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        malformed(std::string("invalid JSON: ") + e.what());
    }
    return from_json(j, tol);
}

void save_file(const Artifact& artifact, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write '" + path + "'");
    out << dump(artifact);
    if (!out) throw Error(ErrorCode::InvalidArgument, "failed writing '" + path + "'");
}

Artifact load_file(const std::string& path, const Tolerances& tol) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Malformed, "cannot read '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str(), tol);
}

}  // namespace agler::artifact
