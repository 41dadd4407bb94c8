#pragma once

// Cayley maps between the polydisk and the poly-halfplane, between Schur and
// Herglotz values, and between commuting contractive and accretive tuples.

#include <vector>

#include "agler/core.hpp"

namespace agler::cayley {

/// Points within this distance of a Cayley pole are rejected.
inline constexpr double kPoleRadius = 1e-14;

/// z_k = (1 + zeta_k) / (1 - zeta_k).
Point disk_to_halfplane(const Point& zeta);

/// zeta_k = (z_k - 1) / (z_k + 1).
Point halfplane_to_disk(const Point& z);

enum class ValueDirection { herglotz_to_schur, schur_to_herglotz };

/// herglotz_to_schur: (M - I)(M + I)^{-1}; schur_to_herglotz: (I - M)^{-1}(I + M).
ComplexMatrix value_cayley(const ComplexMatrix& m, ValueDirection direction);

/// d commuting square matrices of equal size.
class TupleOfMatrices {
public:
    TupleOfMatrices() = default;
    /// Validates shapes and pairwise commutation
    /// ||T_i T_j - T_j T_i|| <= commutation_tol * max(1, ||T_i|| ||T_j||).
    explicit TupleOfMatrices(std::vector<ComplexMatrix> items, double commutation_tol = 1e-10);

    int d() const { return static_cast<int>(items_.size()); }
    Eigen::Index size() const { return items_.empty() ? 0 : items_.front().rows(); }
    const ComplexMatrix& operator[](int k) const { return items_[static_cast<std::size_t>(k)]; }
    const std::vector<ComplexMatrix>& items() const { return items_; }
    double commutation_tol() const { return commutation_tol_; }

    /// Largest pairwise commutator norm.
    double max_commutator() const;

private:
    std::vector<ComplexMatrix> items_;
    double commutation_tol_ = 1e-10;
};

enum class TupleDirection { contractive_to_accretive, accretive_to_contractive };

/// R_k = (I - T_k)^{-1}(I + T_k), resp. T_k = (R_k - I)(R_k + I)^{-1}.
TupleOfMatrices operator_cayley_tuple(const TupleOfMatrices& t, TupleDirection direction,
                                      const Tolerances& tol = {});

/// Double Cayley transform of a function on the poly-halfplane:
/// F(zeta) = (f(C zeta) - I)(f(C zeta) + I)^{-1}.
FunctionHandle double_cayley(const FunctionHandle& f);

/// Composition f o disk_to_halfplane (variables only).
FunctionHandle compose_disk_to_halfplane(const FunctionHandle& f);

/// Composition F o halfplane_to_disk (variables only).
FunctionHandle compose_halfplane_to_disk(const FunctionHandle& f);

}  // namespace agler::cayley
