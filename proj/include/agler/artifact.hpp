#pragma once

// Self-describing JSON artifact files. Complex numbers are [re, im] pairs and
// matrices are row-major nested lists with explicit shapes.

#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "agler/aglerkit.hpp"
#include "agler/bessmertnyi.hpp"
#include "agler/cayley.hpp"
#include "agler/herglotz.hpp"
#include "agler/polyalg.hpp"
#include "agler/realization.hpp"
#include "agler/sampling.hpp"

namespace agler::artifact {

inline constexpr const char* kFormatVersion = "1.0";

enum class Kind {
    pencil,
    gr_realization,
    herglotz_realization,
    matrix_polynomial_set,
    knese_witness,
    report,
    operator_tuple,
    pencil_decomposition,
};

std::string to_string(Kind kind);
Kind kind_from_string(const std::string& name);

/// A pencil together with the factors Y_k of its decomposition phi_k = Y_k psi.
struct DecompositionData {
    bessmertnyi::LongResolventPencil pencil;
    std::vector<ComplexMatrix> factors;

    bool operator==(const DecompositionData& other) const;
};

using Payload = std::variant<bessmertnyi::LongResolventPencil, realization::GivoneRoesserRealization,
                             herglotz::HerglotzRealization, std::vector<poly::MatrixPolynomial>, aglerkit::KneseWitness,
                             std::vector<SampleReport>, cayley::TupleOfMatrices, DecompositionData>;

struct Artifact {
    Kind kind = Kind::report;
    Payload payload;

    bool operator==(const Artifact& other) const;
};

Artifact make(bessmertnyi::LongResolventPencil value);
Artifact make(realization::GivoneRoesserRealization value);
Artifact make(herglotz::HerglotzRealization value);
Artifact make(std::vector<poly::MatrixPolynomial> value);
Artifact make(aglerkit::KneseWitness value);
Artifact make(std::vector<SampleReport> value);
Artifact make(cayley::TupleOfMatrices value);
Artifact make(DecompositionData value);

nlohmann::json to_json(const Artifact& artifact);
/// Parses and re-validates the payload's class invariants. Structural
/// problems raise Malformed; invariant violations keep their own codes.
Artifact from_json(const nlohmann::json& j, const Tolerances& tol = {});

/// Canonical text (two-space indent, sorted keys, trailing newline).
std::string dump(const Artifact& artifact);
Artifact parse(const std::string& text, const Tolerances& tol = {});

void save_file(const Artifact& artifact, const std::string& path);
Artifact load_file(const std::string& path, const Tolerances& tol = {});

nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);
nlohmann::json complex_to_json(Complex c);
Complex complex_from_json(const nlohmann::json& j);

}  // namespace agler::artifact
