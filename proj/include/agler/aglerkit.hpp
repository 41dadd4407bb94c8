#pragma once

// Polynomial Agler decompositions: the Knese identity
//   p(w)^* p(z) - q(w)^* q(z) = sum_k (1 - conj(w_k) z_k) psi_k(w)^* psi_k(z)
// checked coefficientwise, moment-matrix compression of the psi_k, and
// sampled innerness tests.

#include <vector>

#include "agler/polyalg.hpp"
#include "agler/sampling.hpp"

namespace agler::aglerkit {

struct KneseWitness {
    poly::MatrixPolynomial p;
    poly::MatrixPolynomial q;
    std::vector<poly::MatrixPolynomial> psis;
    double residual = 0.0;

    bool operator==(const KneseWitness&) const = default;
};

struct KneseVerdict {
    /// Largest spectral norm among the coefficients of the defect.
    double residual = 0.0;
    bool verdict = false;
};

KneseVerdict verify_knese(const poly::MatrixPolynomial& p, const poly::MatrixPolynomial& q,
                          const std::vector<poly::MatrixPolynomial>& psis, const Tolerances& tol = {});

/// psi_k with psi_k(w)^* psi_k(z) = xi_k(w)^* xi_k(z) and N_k = rank of the
/// moment matrix [xi_{k,beta}^* xi_{k,alpha}] over total degrees <= degree_bound.
std::vector<poly::MatrixPolynomial> compress_sos(const std::vector<poly::MatrixPolynomial>& xis, int degree_bound,
                                                 const Tolerances& tol = {});

/// binom(degree_bound + d, d) * n.
long long compression_bound(int d, int degree_bound, int n);

/// Two reports: "inner_torus" (max ||F(mu)^* F(mu) - I|| over the torus plan)
/// and "inner_continuation" (max ||F(1/conj w)^* F(w) - I|| at w = 0.8 mu).
std::vector<SampleReport> inner_check(const FunctionHandle& f, const SamplePlan& torus_plan, double threshold = 1e-8);

}  // namespace agler::aglerkit
