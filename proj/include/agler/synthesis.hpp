#pragma once

// End-to-end pipelines: pencil -> decomposition -> lurking isometry ->
// Herglotz realization -> pencil. Failures name the stage that raised them.

#include <string>
#include <vector>

#include "agler/bessmertnyi.hpp"
#include "agler/herglotz.hpp"
#include "agler/realization.hpp"
#include "agler/sampling.hpp"

namespace agler::synthesis {

struct Options {
    bool hermitian = false;
    bool real = false;
    std::uint64_t seed = 0;
    /// Random lurking-isometry samples (0: the minimum m + n + 5).
    int samples = 0;
    /// Fresh points for the comparison reports.
    int check_points = 100;
    bool literal_sqrt = false;
};

/// Runs `body`, re-raising any library error as "stage <name>: ..." with the same code.
template <typename Body>
auto run_stage(const std::string& name, Body&& body) -> decltype(body()) {
    try {
        return body();
    } catch (const Error& e) {
        throw Error(e.code(), "stage " + name + ": " + e.detail());
    }
}

/// Realizes the double Cayley transform C(f) of the pencil function directly
/// (no normalization) from theta_k = (1 - zeta_k)^{-1} phi_k(C zeta)(I - C(f)(zeta)).
realization::GivoneRoesserRealization pencil_to_gr(const bessmertnyi::LongResolventPencil& pencil, const Options& opts,
                                                   const Tolerances& tol, std::vector<SampleReport>* reports = nullptr);

struct HerglotzSynthesis {
    herglotz::Split split;
    realization::GivoneRoesserRealization gr;  // realizes the Cayley transform of F_+
    herglotz::HerglotzRealization herglotz;    // realizes F = f o C
    std::vector<SampleReport> reports;
};

HerglotzSynthesis pencil_to_herglotz(const bessmertnyi::LongResolventPencil& pencil, const Options& opts,
                                     const Tolerances& tol);

struct RoundTrip {
    HerglotzSynthesis stages;
    bessmertnyi::LongResolventPencil pencil;
    /// "pencil_match": max ||f'(z) - f(z)|| at fresh poly-halfplane points.
    SampleReport comparison;
};

inline constexpr double kRoundTripThreshold = 1e-7;

RoundTrip pencil_roundtrip(const bessmertnyi::LongResolventPencil& pencil, const Options& opts, const Tolerances& tol);

}  // namespace agler::synthesis
