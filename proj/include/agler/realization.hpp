#pragma once

// Givone-Roesser colligations: transfer functions, defect functions and the
// lurking-isometry synthesis.

#include <vector>

#include "agler/cayley.hpp"
#include "agler/core.hpp"
#include "agler/sampling.hpp"

namespace agler::realization {

struct StructureFlags {
    bool unitary = true;
    bool hermitian = false;
    bool real = false;

    bool operator==(const StructureFlags&) const = default;
};

/// U = [A B; C D] acting on C^m (+) C^n, with the state space split as
/// m_1 + ... + m_d. Flagged properties are checked on construction.
class GivoneRoesserRealization {
public:
    GivoneRoesserRealization() = default;
    GivoneRoesserRealization(int n, std::vector<int> state_dims, ComplexMatrix u, StructureFlags flags,
                             const Tolerances& tol = {});

    int d() const { return static_cast<int>(state_dims_.size()); }
    int n() const { return n_; }
    int m() const { return m_; }
    const std::vector<int>& state_dims() const { return state_dims_; }
    const ComplexMatrix& u() const { return u_; }
    const StructureFlags& flags() const { return flags_; }

    auto a() const { return u_.topLeftCorner(m_, m_); }
    auto b() const { return u_.topRightCorner(m_, n_); }
    auto c() const { return u_.bottomLeftCorner(n_, m_); }
    auto dd() const { return u_.bottomRightCorner(n_, n_); }

    /// Offset of state block k inside C^m.
    int block_offset(int k) const;
    /// P(zeta) = Diag[zeta_1 I_{m_1}, ..., zeta_d I_{m_d}].
    ComplexMatrix variable_matrix(const Point& zeta) const;
    /// P_k = Diag[0, ..., I_{m_k}, ..., 0].
    ComplexMatrix projector(int k) const;

    bool operator==(const GivoneRoesserRealization& other) const;

private:
    int n_ = 0;
    int m_ = 0;
    std::vector<int> state_dims_;
    ComplexMatrix u_;
    StructureFlags flags_;
};

/// D + C (I - P(zeta) A)^{-1} P(zeta) B.
ComplexMatrix eval_transfer(const GivoneRoesserRealization& re, const Point& zeta);

FunctionHandle transfer_handle(const GivoneRoesserRealization& re);

/// Transfer function on a commuting tuple of strict contractions, with P(zeta)
/// replaced by sum_k P_k (x) T_k. Result acts on C^n (x) C^s.
ComplexMatrix eval_transfer_tuple(const GivoneRoesserRealization& re, const cayley::TupleOfMatrices& t);

/// theta_k(zeta) = P_k (I - A P(zeta))^{-1} B, an m_k x n function.
std::vector<FunctionHandle> defect_functions(const GivoneRoesserRealization& re);

struct LurkingOptions {
    bool hermitian = false;
    bool real = false;
    /// Random part of the sample plan (polydisk). The origin and the points
    /// 0.5 e_k are always added; count 0 means the minimum m + n + 5.
    SamplePlan plan{SampleDomain::polydisk, 0, 0, 0.9, 0.0};
};

/// Synthesizes a unitary colligation from an Agler decomposition
///   I - F(w)^* F(z) = sum_k (1 - conj(w_k) z_k) theta_k(w)^* theta_k(z)
/// by mapping [P(z) theta(z); I] h to [theta(z); F(z)] h over the sample plan
/// and completing the resulting isometry.
GivoneRoesserRealization lurking_isometry(const FunctionHandle& f, const std::vector<FunctionHandle>& thetas,
                                          const LurkingOptions& options = {}, const Tolerances& tol = {});

/// Compares eval_transfer with f over the plan ("transfer_match", relative to
/// max(1, ||f||), threshold match_threshold) and reports the unitarity,
/// Hermitian and real residuals of U. The last two only gate the verdict when
/// the corresponding flag is set.
std::vector<SampleReport> verify_realization(const GivoneRoesserRealization& re, const FunctionHandle& f,
                                             const SamplePlan& plan, const Tolerances& tol = {},
                                             double match_threshold = 1e-8);

/// Residual of I - F(w)^*F(z) - sum_k (1 - conj(w_k) z_k) theta_k(w)^* theta_k(z)
/// over `pairs` random pairs from the polydisk plan.
SampleReport agler_decomposition_check(const GivoneRoesserRealization& re, int pairs, std::uint64_t seed,
                                       double threshold = 1e-9);

/// Residual of F(w)^* - F(z) - sum_k (conj(w_k) - z_k) theta_k(w)^* theta_k(z).
SampleReport difference_identity_check(const GivoneRoesserRealization& re, int pairs, std::uint64_t seed,
                                       double threshold = 1e-9);

}  // namespace agler::realization
