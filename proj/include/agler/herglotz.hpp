#pragma once

// Herglotz realizations F(zeta) = beta + V^*(W - P(zeta))^{-1}(W + P(zeta))V and
// the pipeline that builds them from a Cayley inner Herglotz-Agler function.

#include <vector>

#include "agler/core.hpp"
#include "agler/realization.hpp"

namespace agler::herglotz {

class HerglotzRealization {
public:
    HerglotzRealization() = default;
    /// Checks beta + beta^* = 0 and W^*W = I within identity_atol.
    HerglotzRealization(std::vector<int> state_dims, ComplexMatrix beta, ComplexMatrix w, ComplexMatrix v,
                        const Tolerances& tol = {});

    int d() const { return static_cast<int>(state_dims_.size()); }
    int n() const { return static_cast<int>(beta_.rows()); }
    int m() const { return static_cast<int>(w_.rows()); }
    const std::vector<int>& state_dims() const { return state_dims_; }
    const ComplexMatrix& beta() const { return beta_; }
    const ComplexMatrix& w() const { return w_; }
    const ComplexMatrix& v() const { return v_; }

    ComplexMatrix variable_matrix(const Point& zeta) const;
    ComplexMatrix projector(int k) const;

    bool operator==(const HerglotzRealization& other) const;

private:
    std::vector<int> state_dims_;
    ComplexMatrix beta_;
    ComplexMatrix w_;
    ComplexMatrix v_;
};

ComplexMatrix eval_herglotz(const HerglotzRealization& h, const Point& zeta);
FunctionHandle herglotz_handle(const HerglotzRealization& h);

struct Split {
    ComplexMatrix beta;   // skew-Hermitian part of F(0)
    ComplexMatrix gamma;  // Hermitian part, PSD
    ComplexMatrix delta;  // r x n, gamma = delta^* delta
};

/// F(0) = beta + gamma with gamma = delta^* delta of full row rank.
Split split_at_zero(const ComplexMatrix& f0, const Tolerances& tol = {});

/// F_+(zeta) = L^*(F(zeta) - beta)L with L = delta^*(delta delta^*)^{-1}. The
/// representation F = beta + delta^* F_+ delta and F_+(0) = I are checked at
/// `checks` seeded polydisk points; failure raises KernelNotConstant.
FunctionHandle reduce_to_plus(const FunctionHandle& f, const ComplexMatrix& beta, const ComplexMatrix& delta,
                              const Tolerances& tol = {}, int checks = 20, std::uint64_t seed = 0x5eed);

/// W = (A + BC)^*, V = B delta from a unitary colligation of the Cayley
/// transform of F_+ (which has D = 0).
HerglotzRealization schur_to_herglotz(const realization::GivoneRoesserRealization& re, const ComplexMatrix& beta,
                                      const ComplexMatrix& delta, const Tolerances& tol = {});

/// xi_k(zeta) = sqrt(2) P_k (I - W^* P(zeta))^{-1} V, with
/// F(w)^* + F(z) = sum_k (1 - conj(w_k) z_k) xi_k(w)^* xi_k(z).
std::vector<FunctionHandle> xi_functions(const HerglotzRealization& h);

}  // namespace agler::herglotz
