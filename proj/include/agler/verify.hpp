#pragma once

// Sampled property checks and seeded instance generators.

#include <string>
#include <vector>

#include "agler/artifact.hpp"
#include "agler/bessmertnyi.hpp"
#include "agler/cayley.hpp"
#include "agler/realization.hpp"
#include "agler/sampling.hpp"

namespace agler::verify {

/// max ||f(z) + f(-conj z)^*|| over the plan's poly-halfplane points.
SampleReport check_cayley_inner(const FunctionHandle& f, const SamplePlan& plan, double threshold = 1e-9);

/// max ||f(lambda z) - lambda f(z)|| over plan points and scaling_factors().
SampleReport check_homogeneous(const FunctionHandle& f, const SamplePlan& plan, double threshold = 1e-9);

/// max ||f(conj z) - conj f(z)||.
SampleReport check_real(const FunctionHandle& f, const SamplePlan& plan, double threshold = 1e-9);

/// Block Gram matrix G = [K(lambda_i, lambda_j)] over the points; the report's
/// residual is -lambda_min(G) and the threshold psd_atol * max(1, ||G||).
SampleReport check_positive_kernel(const KernelFunction& k, const std::vector<Point>& points,
                                   const Tolerances& tol = {});

/// Residual -lambda_min((f(z) + f(z)^*)/2) over the plan.
SampleReport check_herglotz_positivity(const FunctionHandle& f, const SamplePlan& plan, double threshold = 1e-9);

/// f(R) + f(R)^* >= 0 on seeded commuting strictly accretive tuples R of size
/// <= max_size, where `schur` realizes the double Cayley transform of f and
/// f(R) = (I - F(T))^{-1}(I + F(T)) with T the Cayley transform of R.
SampleReport check_tuple_positivity(const realization::GivoneRoesserRealization& schur, int count,
                                    std::uint64_t seed, int max_size = 4, double threshold = 1e-8);

/// max ||f(w)^* + f(z) - sum_k (conj(w_k) + z_k) phi_k(w)^* phi_k(z)|| over
/// seeded pairs (sign -1 checks the difference form).
SampleReport check_halfplane_decomposition(const FunctionHandle& f, const std::vector<FunctionHandle>& phis,
                                           int pairs, std::uint64_t seed, double sign = 1.0, double threshold = 1e-9);

enum class InstanceKind {
    pencil_nonhomogeneous,
    pencil_homogeneous,
    pencil_real,
    herglotz_realization,
    gr_unitary,
    commuting_contractions,
};

std::string to_string(InstanceKind kind);
InstanceKind instance_kind_from_string(const std::string& name);

struct InstanceDims {
    int d = 2;
    int n = 1;
    int m = 1;  // inner block (pencils) or state size (realizations)
    int s = 2;  // tuple matrix size
};

/// Haar-like unitary from the QR factorization of a complex Gaussian matrix.
ComplexMatrix random_unitary(Rng& rng, Eigen::Index size);

bessmertnyi::LongResolventPencil random_pencil(bessmertnyi::PencilClass tag, std::uint64_t seed, int d, int n, int m);
cayley::TupleOfMatrices random_commuting_contractions(std::uint64_t seed, int d, int s);

/// Deterministic instance of the kind; dims must be positive where used.
artifact::Artifact gen_instance(InstanceKind kind, std::uint64_t seed, const InstanceDims& dims);

}  // namespace agler::verify
